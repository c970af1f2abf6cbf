#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dendrite::cli {

/// Process exit codes; every failure class has its own.
enum Exit : int {
    ok = 0,
    usage = 1,
    parse_error = 2,
    dimension_mismatch = 3,
    io_error = 4,
    compile_error = 5,
    evaluation_error = 6,
    analysis_precondition = 7,
    bench_disagreement = 8,
    bench_refused = 9,
    topology_mismatch = 10,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dendrite::cli

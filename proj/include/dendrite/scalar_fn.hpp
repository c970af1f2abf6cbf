#pragma once

#include "dendrite/grid.hpp"

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dendrite {

/// A real function of the path parameter, either sampled on a grid or given
/// in closed form. Closed forms are only ever evaluated numerically.
class ScalarFn {
public:
    using Closed = std::function<double(double)>;

    static ScalarFn sampled(std::vector<double> values, SGrid grid);
    static ScalarFn closed(Closed fn, std::string description = {});
    static ScalarFn constant(double value);

    bool is_sampled() const noexcept { return std::holds_alternative<Sampled>(form_); }
    const std::string& description() const noexcept { return description_; }

    /// Values at every sample of `grid`. A sampled function only samples onto
    /// its own grid; anything else raises DomainError.
    std::vector<double> sample(const SGrid& grid) const;

    /// Pointwise value. Sampled forms use the nearest grid sample.
    double operator()(double s) const;

private:
    struct Sampled {
        std::shared_ptr<const std::vector<double>> values;
        SGrid grid;
    };
    struct ClosedForm {
        Closed fn;
    };

    explicit ScalarFn(std::variant<Sampled, ClosedForm> form, std::string description)
        : form_(std::move(form)), description_(std::move(description)) {}

    std::variant<Sampled, ClosedForm> form_;
    std::string description_;
};

} // namespace dendrite

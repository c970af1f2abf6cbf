#include "dendrite/scalar_fn.hpp"

#include "dendrite/error.hpp"

#include <cmath>

namespace dendrite {

ScalarFn ScalarFn::sampled(std::vector<double> values, SGrid grid) {
    if (values.size() != grid.count())
        throw DomainError("sampled function has " + std::to_string(values.size()) +
                          " values but the grid has " + std::to_string(grid.count()));
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!std::isfinite(values[k]))
            throw NonFiniteError("sampled function value is not finite", k);
    auto shared = std::make_shared<const std::vector<double>>(std::move(values));
    return ScalarFn(Sampled{std::move(shared), grid}, "sampled");
}

ScalarFn ScalarFn::closed(Closed fn, std::string description) {
    if (!fn)
        throw DomainError("closed-form function is empty");
    return ScalarFn(ClosedForm{std::move(fn)}, std::move(description));
}

ScalarFn ScalarFn::constant(double value) {
    return closed([value](double) { return value; }, std::to_string(value));
}

std::vector<double> ScalarFn::sample(const SGrid& grid) const {
    if (const auto* s = std::get_if<Sampled>(&form_)) {
        if (!(s->grid == grid))
            throw DomainError("sampled function lives on a different grid; resample it first");
        return *s->values;
    }
    const auto& fn = std::get<ClosedForm>(form_).fn;
    std::vector<double> out(grid.count());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = fn(grid.at(k));
    return out;
}

double ScalarFn::operator()(double s) const {
    if (const auto* smp = std::get_if<Sampled>(&form_))
        return (*smp->values)[smp->grid.index_of(s)];
    return std::get<ClosedForm>(form_).fn(s);
}

} // namespace dendrite

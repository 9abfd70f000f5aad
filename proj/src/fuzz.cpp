#include "warpcheck/fuzz.hpp"

#include <cstdio>
#include <random>
#include <string>

#include "warpcheck/grw.hpp"

namespace warpcheck {
namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

WarpedProduct fuzzed_warped_product(std::uint64_t seed, double amplitude) {
    std::mt19937_64 rng(seed);
    auto coef = [&rng, amplitude](double lo, double hi) {
        return uniform_in(rng, lo, hi) * amplitude;
    };
    auto freq = [&rng] { return uniform_in(rng, 0.5, 1.5); };
    auto phase = [&rng] { return uniform_in(rng, 0.0, 6.28); };

    const std::vector<std::string> coords = {"x1", "x2"};

    const std::string g11 = "1+" + fmt(coef(0.05, 0.12)) + "*sin(" + fmt(freq()) + "*x1+" +
                            fmt(phase()) + ")+" + fmt(coef(0.02, 0.08)) + "*x2^2";
    const std::string g22 = "1+" + fmt(coef(0.05, 0.12)) + "*cos(" + fmt(freq()) + "*x2+" +
                            fmt(phase()) + ")+" + fmt(coef(0.02, 0.08)) + "*x1^2";
    const std::string g12 = fmt(coef(-0.12, 0.12)) + "*sin(" + fmt(freq()) + "*x1)*cos(" +
                            fmt(freq()) + "*x2)";
    const std::string fsrc = "1+" + fmt(coef(0.03, 0.10)) + "*sin(x1+" + fmt(phase()) +
                             ")+" + fmt(coef(0.02, 0.05)) + "*x2^2";

    const Expression off = parse(g12, coords);
    std::vector<Expression> comps = {parse(g11, coords), off, off, parse(g22, coords)};
    DomainHints hints;
    hints.bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    MetricChart base(coords, std::move(comps), {1, 1}, std::move(hints));

    MetricChart fiber = standard_fiber(FiberKind::Sphere, 2, 1.0).first;
    return assemble(base, fiber, parse(fsrc, coords));
}

} // namespace warpcheck

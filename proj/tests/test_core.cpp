#include <doctest.h>

#include <cmath>

#include "nbds/core.hpp"
#include "nbds/errors.hpp"

using namespace nbds;

namespace {

Device sub_device(double v_b = 1.2) {
    Device d;
    d.regime = Regime::subthreshold;
    d.sub.v_b = v_b;
    return d;
}

Device si_device() {
    Device d;
    d.regime = Regime::strong_inversion;
    return d;
}

}  // namespace

TEST_CASE("capacitor mapping, subthreshold") {
    // tau = 0.65 s at I_dc = 80 pA with D = 65 mV gives 800 pF
    const double c = solve_capacitor(0.65, 80e-12, sub_device());
    CHECK(c == doctest::Approx(800e-12).epsilon(1e-12));
    CHECK_THROWS_AS(solve_capacitor(-1.0, 80e-12, sub_device()), ValidationError);
}

TEST_CASE("capacitor mapping, strong inversion presets") {
    const Device d = si_device();  // k_n = k_p so beta = 1
    const double paper = solve_capacitor(1e-3, 1e-6, d, MappingConstant::paper);
    const double derived = solve_capacitor(1e-3, 1e-6, d, MappingConstant::derived);
    CHECK(paper == doctest::Approx(2.0 * 1e-3 * std::sqrt(100e-6) * 1e-6 / 3.0));
    CHECK(derived / paper == doctest::Approx(1.5));
}

TEST_CASE("capacitor drive current") {
    CHECK(compute_icin({0.0, 0.0}, 1e-12, 1e-12, 1e-12, Regime::subthreshold) == 0.0);
    // the slow-core operating point of the neuron example
    const double icin =
        compute_icin({0.7e-9, 0.0}, 7.16e-12, 7.16e-12, 6.4e-12, Regime::subthreshold);
    CHECK(icin == doctest::Approx(0.313e-9).epsilon(1e-2));

    SUBCASE("strong inversion uses the root denominator") {
        const double f = 1e-6, i = 4e-6, idc = 2e-6;
        const double got = compute_icin({f, 0.0}, i, i, idc, Regime::strong_inversion);
        CHECK(got == doctest::Approx(f * idc / (2.0 * std::sqrt(i))));
    }

    SUBCASE("underflow is reported") {
        CHECK_THROWS_AS(
            compute_icin({1e-9, 0.0}, 1e-19, 1e-19, 1e-12, Regime::subthreshold),
            DenominatorUnderflow);
    }
}

TEST_CASE("core derivative and clipping") {
    CoreState s{0.6, false};
    CHECK(core_derivative(s, 0.313e-9, 800e-12, false, 0.0, 1.2) ==
          doctest::Approx(0.391).epsilon(1e-2));
    CHECK(core_derivative(s, 0.0, 800e-12, false, 0.0, 1.2) == 0.0);

    SUBCASE("outward push at a bound returns zero and flags") {
        CoreState hi{1.2, false};
        CHECK(core_derivative(hi, 1e-9, 800e-12, true, 0.0, 1.2) == 0.0);
        CHECK(hi.saturation_flag);
        CoreState lo{0.0, false};
        CHECK(core_derivative(lo, -1e-9, 800e-12, true, 0.0, 1.2) == 0.0);
        CHECK(lo.saturation_flag);
        // inward push passes through
        CoreState ok{1.2, false};
        CHECK(core_derivative(ok, -1e-9, 800e-12, true, 0.0, 1.2) != 0.0);
        CHECK_FALSE(ok.saturation_flag);
    }
}

TEST_CASE("initialization round-trips through the readout") {
    const Device d = sub_device();
    for (double x : {-5e-9, -1e-9, 0.0, 0.3e-9, 8e-9}) {
        const CoreState s = init_core(d, x);
        const double back = read_out(s, d).i_out();
        CHECK(std::abs(back - x) <= 1e-9 * std::max(std::abs(x), 1e-15));
    }

    const Device si = si_device();
    for (double x : {-10e-6, 0.0, 5e-6}) {
        const CoreState s = init_core(si, x);
        CHECK(std::abs(read_out(s, si).i_out() - x) <= 1e-12);
    }
}

TEST_CASE("readout rails carry the branch currents") {
    const Device d = sub_device();
    const CoreState s{0.55, false};
    const CoreReadout r = read_out(s, d);
    CHECK(r.rails().pos == r.branches.i_b);
    CHECK(r.rails().neg == r.branches.i_a);
    CHECK(r.rails().pos > 0.0);
    CHECK(r.rails().neg > 0.0);
    CHECK(r.rails().value() == doctest::Approx(r.i_out()));
}

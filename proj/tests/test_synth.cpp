#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "nbds/builtins.hpp"
#include "nbds/errors.hpp"
#include "nbds/netlist.hpp"

using namespace nbds;

namespace {

// Core-like (non-canonical) rails for a state value.
BilateralSignal lift(double v, double cm) {
    return {cm + (v > 0 ? v : 0.0), cm + (v < 0 ? -v : 0.0)};
}

// Compares netlist evaluation with the reference expression semantics at
// one operating point.
void check_semantics(const DynSystem& sys, const Netlist& n, std::mt19937& rng) {
    std::uniform_real_distribution<double> val(-10e-9, 10e-9), cm(0.0, 5e-9);
    std::map<std::string, double> sv, iv;
    std::vector<BilateralSignal> rails;
    std::vector<double> inputs;
    for (const auto& s : sys.states) {
        const double v = val(rng);
        sv[s.name] = v;
        rails.push_back(lift(v, cm(rng)));
    }
    for (const auto& i : sys.inputs) {
        const double v = val(rng);
        iv[i.name] = v;
        inputs.push_back(v);
    }
    const std::vector<BilateralSignal> f = eval_netlist(n, rails, inputs);
    for (size_t i = 0; i < sys.states.size(); ++i) {
        const double expected = eval_expr(*sys.equations.at(sys.states[i].name), sv, iv);
        const double got = f[i].value();
        CHECK(std::abs(got - expected) <=
              std::max(1e-10 * std::abs(expected), 1e-19));
    }
}

}  // namespace

TEST_CASE("sign classification") {
    DynSystem sys;
    sys.states = {{"v", 1.0, 1e-9, 0.0}};
    CHECK(classify(*constant(-2e-9)) == SignClass::single_sided);
    CHECK(classify(*square(state_ref("v"), 1e-9)) == SignClass::single_sided);
    CHECK(classify(*state_ref("v")) == SignClass::bilateral);
    CHECK(classify(*neg(square(state_ref("v"), 1e-9))) == SignClass::single_sided);
    CHECK(classify(*mul(constant(1e-9), constant(2e-9), 1e-9)) ==
          SignClass::single_sided);
    CHECK(classify(*mul(constant(1e-9), state_ref("v"), 1e-9)) ==
          SignClass::bilateral);
    CHECK(classify(*add(state_ref("v"), constant(1e-9))) == SignClass::bilateral);
}

TEST_CASE("neuron census") {
    const Netlist n = lower(builtin_fhn());
    CHECK(n.cores.size() == 2);
    CHECK(n.count(BlockKind::sq2) == 1);
    CHECK(n.count(BlockKind::mult2) == 2);
    CHECK(n.count(BlockKind::split) == 1);
    CHECK(n.count(BlockKind::sq1) == 0);
    CHECK(n.count(BlockKind::mult1p) + n.count(BlockKind::mult1n) == 0);
    CHECK(n.count(BlockKind::mult3) == 0);
    CHECK(n.find_core("v") != nullptr);
    CHECK(n.find_core("v")->mapping.c == doctest::Approx(800e-12));
}

TEST_CASE("lorenz census") {
    const Netlist n = lower(builtin_lorenz());
    CHECK(n.cores.size() == 3);
    CHECK(n.count(BlockKind::mult3) == 2);
    CHECK(n.count(BlockKind::mult2) == 1);
    CHECK(n.count(BlockKind::sq2) == 0);
    CHECK(n.count(BlockKind::split) == 0);
}

TEST_CASE("strong inversion lowering uses bilateral multipliers and root blocks") {
    const Netlist n = lower(builtin_fhn_si());
    CHECK(n.count(BlockKind::bmult) == 3);  // square, cube, recovery product
    CHECK(n.count(BlockKind::mult2) == 0);
    CHECK(n.count(BlockKind::sq2) == 0);
    CHECK(n.count(BlockKind::rootsq) == 2 * static_cast<int>(n.cores.size()));
    // the built-in factor 2 is neutralized by doubling the bound scale
    for (const auto& b : n.blocks)
        if (b.kind == BlockKind::bmult) CHECK(b.scale > 0.0);
}

TEST_CASE("shared subexpressions are lowered once") {
    const Netlist n = lower(builtin_hopf());
    // x^2 and y^2 appear in both equations; r^2 is built once
    CHECK(n.count(BlockKind::sq2) == 2);
    CHECK(n.cores.size() == 2);
}

TEST_CASE("mirrors account for fan-out beyond one") {
    const Netlist n = lower(builtin_fhn());
    // v feeds its squarer, the cube multiplier, and both state equations
    CHECK(n.mirror_count() >= 3);
    for (const auto& b : n.blocks)
        if (b.kind == BlockKind::mirror) {
            CHECK(b.operands.size() == 1);
            CHECK(b.operands[0].size() == 1);
        }
}

TEST_CASE("lowering is deterministic") {
    const std::string a = emit(lower(builtin_lorenz()));
    const std::string b = emit(lower(builtin_lorenz()));
    CHECK(a == b);
}

TEST_CASE("netlist JSON round-trip") {
    for (const char* name : {"fhn", "lorenz", "hopf", "network-b", "fhn-si"}) {
        const Netlist n = lower(builtin_by_name(name));
        const std::string doc = emit(n);
        const Netlist back = netlist_from_json(doc);
        CHECK(emit(back) == doc);
    }
    CHECK_THROWS_AS(netlist_from_json("{\"schema\":\"other\"}"), ValidationError);
}

TEST_CASE("block kind names round-trip") {
    for (int k = 0; k <= static_cast<int>(BlockKind::mirror); ++k) {
        const auto kind = static_cast<BlockKind>(k);
        CHECK(block_kind_from_name(block_kind_name(kind)) == kind);
    }
    CHECK_THROWS_AS(block_kind_from_name("FOO"), ValidationError);
}

TEST_CASE("netlist evaluation matches expression semantics on builtins") {
    std::mt19937 rng(31);
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const DynSystem sys = builtin_by_name(name);
        const Netlist n = lower(sys);
        for (int i = 0; i < 50; ++i) check_semantics(sys, n, rng);
    }
}

TEST_CASE("negated constants fold into term polarity") {
    DynSystem sys;
    sys.name = "t";
    sys.states = {{"v", 1.0, 1e-9, 0.0}};
    sys.equations["v"] = add(state_ref("v"), constant(-0.5e-9));
    sys.validate();
    const Netlist n = lower(sys);
    REQUIRE(n.const_sources.size() == 1);
    CHECK(n.const_sources[0] == 0.5e-9);  // stored as a magnitude
    const std::vector<BilateralSignal> f =
        eval_netlist(n, {lift(1e-9, 2e-9)}, {});
    CHECK(f[0].value() == doctest::Approx(0.5e-9));
}

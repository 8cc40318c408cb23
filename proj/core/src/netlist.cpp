#include "nbds/netlist.hpp"

#include <cmath>
#include <json.hpp>

#include "nbds/blocks.hpp"
#include "nbds/errors.hpp"

namespace nbds {

using ordered_json = nlohmann::ordered_json;

std::string block_kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::mult1p: return "MULT1P";
        case BlockKind::mult1n: return "MULT1N";
        case BlockKind::sq1: return "SQ1";
        case BlockKind::sq2: return "SQ2";
        case BlockKind::mult2: return "MULT2";
        case BlockKind::mult3: return "MULT3";
        case BlockKind::split: return "SPLIT";
        case BlockKind::rootsq: return "ROOTSQ";
        case BlockKind::multcore: return "MULTCORE";
        case BlockKind::bmult: return "BMULT";
        case BlockKind::mirror: return "MIRROR";
    }
    return "?";
}

BlockKind block_kind_from_name(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(BlockKind::mirror); ++k)
        if (block_kind_name(static_cast<BlockKind>(k)) == s)
            return static_cast<BlockKind>(k);
    throw ValidationError("unknown block kind '" + s + "'");
}

SignClass classify(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::constant:
        case Expr::Kind::square:
            return SignClass::single_sided;
        case Expr::Kind::state_ref:
        case Expr::Kind::input_ref:
        case Expr::Kind::add:
        case Expr::Kind::sub:
            return SignClass::bilateral;
        case Expr::Kind::neg:
        case Expr::Kind::div_const:
            return classify(*e.lhs);
        case Expr::Kind::mul:
            return (classify(*e.lhs) == SignClass::single_sided &&
                    classify(*e.rhs) == SignClass::single_sided)
                       ? SignClass::single_sided
                       : SignClass::bilateral;
    }
    return SignClass::bilateral;
}

int Netlist::count(BlockKind k) const {
    int n = 0;
    for (const auto& b : blocks)
        if (b.kind == k) ++n;
    return n;
}

const CoreInst* Netlist::find_core(const std::string& state) const {
    for (const auto& c : cores)
        if (c.state == state) return &c;
    return nullptr;
}

namespace {

struct Lowered {
    Operand terms;
    SignClass cls = SignClass::bilateral;
};

// Extracts the single term of a single-sided lowered value, normalized to
// positive polarity; returns the folded static sign.
int normalize_single(Lowered& v) {
    if (v.terms.empty()) return 1;  // the zero constant
    if (v.terms.size() != 1)
        throw LoweringError("single-sided value with more than one rail source");
    const int sign = v.terms.front().sign;
    v.terms.front().sign = 1;
    return sign;
}

class Lowerer {
public:
    Lowerer(const DynSystem& sys, MappingConstant mapping) : sys_(sys), mapping_(mapping) {
        nl_.system = sys.name;
        nl_.regime = sys.regime;
        nl_.device = sys.device;
    }

    Netlist run() {
        for (size_t i = 0; i < sys_.inputs.size(); ++i) {
            nl_.input_names.push_back(sys_.inputs[i].name);
            nl_.input_drives.push_back(sys_.inputs[i].drive);
            BlockInst split{BlockKind::split, 0.0,
                            {{Term{{SignalRef::Src::input, static_cast<int>(i)}, 1}}}};
            input_split_[sys_.inputs[i].name] = add_block(std::move(split));
        }
        for (size_t i = 0; i < sys_.states.size(); ++i)
            state_index_[sys_.states[i].name] = static_cast<int>(i);

        for (const auto& s : sys_.states) {
            CoreInst core;
            core.state = s.name;
            core.init = s.init;
            core.mapping.regime = sys_.regime;
            core.mapping.tau = s.tau;
            core.mapping.i_dc = s.i_dc;
            core.mapping.mapping_constant = mapping_;
            core.mapping.c = solve_capacitor(s.tau, s.i_dc, sys_.device, mapping_);
            core.f = lower_expr(*sys_.equations.at(s.name)).terms;
            nl_.cores.push_back(std::move(core));
        }

        if (sys_.regime == Regime::strong_inversion)
            for (size_t i = 0; i < nl_.cores.size(); ++i)
                for (int r = 0; r < 2; ++r)  // I_Cin+ and I_Cin- denominators
                    add_block({BlockKind::rootsq, nl_.cores[i].mapping.i_dc,
                               {{Term{{SignalRef::Src::core, static_cast<int>(i)}, 1}}}});

        add_mirrors();
        return std::move(nl_);
    }

private:
    int add_block(BlockInst b) {
        nl_.blocks.push_back(std::move(b));
        return static_cast<int>(nl_.blocks.size()) - 1;
    }

    Term block_out(int id, int sign = 1) {
        return {{SignalRef::Src::block, id}, sign};
    }

    Lowered const_source(double value) {
        if (value == 0.0) return {{}, SignClass::single_sided};
        const double mag = std::abs(value);
        auto it = const_index_.find(mag);
        int idx;
        if (it != const_index_.end()) {
            idx = it->second;
        } else {
            nl_.const_sources.push_back(mag);
            idx = static_cast<int>(nl_.const_sources.size()) - 1;
            const_index_[mag] = idx;
        }
        return {{Term{{SignalRef::Src::constant, idx}, value < 0 ? -1 : 1}},
                SignClass::single_sided};
    }

    Lowered lower_expr(const Expr& e) {
        const std::string key = render_expr(e);
        auto memo = memo_.find(key);
        if (memo != memo_.end()) return memo->second;
        Lowered out = lower_uncached(e);
        memo_[key] = out;
        return out;
    }

    Lowered lower_uncached(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::state_ref:
                return {{Term{{SignalRef::Src::core, state_index_.at(e.name)}, 1}},
                        SignClass::bilateral};
            case Expr::Kind::input_ref:
                return {{block_out(input_split_.at(e.name))}, SignClass::bilateral};
            case Expr::Kind::constant:
                return const_source(e.value);
            case Expr::Kind::neg: {
                Lowered v = lower_expr(*e.lhs);
                for (auto& t : v.terms) t.sign = -t.sign;
                return v;
            }
            case Expr::Kind::add:
            case Expr::Kind::sub: {
                Lowered l = lower_expr(*e.lhs);
                Lowered r = lower_expr(*e.rhs);
                if (e.kind == Expr::Kind::sub)
                    for (auto& t : r.terms) t.sign = -t.sign;
                l.terms.insert(l.terms.end(), r.terms.begin(), r.terms.end());
                l.cls = SignClass::bilateral;
                return l;
            }
            case Expr::Kind::mul:
                return lower_product(lower_expr(*e.lhs), lower_expr(*e.rhs), e.scale);
            case Expr::Kind::square: {
                Lowered x = lower_expr(*e.lhs);
                if (sys_.regime == Regime::strong_inversion) {
                    const int id = add_block({BlockKind::bmult, 2.0 * e.scale,
                                              {x.terms, x.terms}});
                    return {{block_out(id)}, SignClass::bilateral};
                }
                if (x.cls == SignClass::single_sided) {
                    normalize_single(x);  // sign squared away
                    const int id = add_block({BlockKind::sq1, e.scale, {x.terms}});
                    return {{block_out(id)}, SignClass::single_sided};
                }
                const int id = add_block({BlockKind::sq2, e.scale, {x.terms}});
                return {{block_out(id)}, SignClass::single_sided};
            }
            case Expr::Kind::div_const:
                // x / s reads as x * I_ref / s (current-mode divide by a
                // constant realized with a multiplier and a bias input).
                return lower_product(const_source(kDivReferenceCurrent),
                                     lower_expr(*e.lhs), e.scale);
        }
        throw LoweringError("unhandled expression node");
    }

    Lowered lower_product(Lowered l, Lowered r, double scale) {
        if (sys_.regime == Regime::strong_inversion) {
            // Every product maps to the bilateral multiplier; its built-in
            // factor 2 is neutralized by binding I_b = 2 * scale.
            const int id = add_block({BlockKind::bmult, 2.0 * scale, {l.terms, r.terms}});
            return {{block_out(id)}, SignClass::bilateral};
        }
        const bool ls = l.cls == SignClass::single_sided;
        const bool rs = r.cls == SignClass::single_sided;
        if (ls && rs) {
            const int sign = normalize_single(l) * normalize_single(r);
            const int id = add_block({BlockKind::mult1p, scale, {l.terms, r.terms}});
            return {{block_out(id, sign)}, SignClass::single_sided};
        }
        if (ls || rs) {
            Lowered& single = ls ? l : r;
            Lowered& bilateral = ls ? r : l;
            const int sign = normalize_single(single);
            const int id = add_block(
                {BlockKind::mult2, scale, {single.terms, bilateral.terms}});
            return {{block_out(id, sign)}, SignClass::bilateral};
        }
        const int id = add_block({BlockKind::mult3, scale, {l.terms, r.terms}});
        return {{block_out(id)}, SignClass::bilateral};
    }

    // One mirror per consumption of a signal beyond the first; fan-out audit.
    void add_mirrors() {
        std::map<SignalRef, int> uses;
        for (const auto& b : nl_.blocks) {
            if (b.kind == BlockKind::mirror) continue;
            for (const auto& op : b.operands)
                for (const auto& t : op) ++uses[t.signal];
        }
        for (const auto& c : nl_.cores)
            for (const auto& t : c.f) ++uses[t.signal];
        std::vector<BlockInst> mirrors;
        for (const auto& [sig, n] : uses)
            for (int i = 1; i < n; ++i)
                mirrors.push_back({BlockKind::mirror, 0.0, {{Term{sig, 1}}}});
        for (auto& m : mirrors) add_block(std::move(m));
    }

    const DynSystem& sys_;
    MappingConstant mapping_;
    Netlist nl_;
    std::map<std::string, int> state_index_;
    std::map<std::string, int> input_split_;
    std::map<double, int> const_index_;
    std::map<std::string, Lowered> memo_;
};

}  // namespace

Netlist lower(const DynSystem& sys, MappingConstant mapping) {
    sys.validate();
    return Lowerer(sys, mapping).run();
}

NetlistEvaluator::NetlistEvaluator(const Netlist& n) : netlist_(n) {
    block_out_.resize(n.blocks.size());
    const_rails_.reserve(n.const_sources.size());
    for (double c : n.const_sources) const_rails_.push_back({c, 0.0});
    input_rails_.resize(n.input_names.size());
}

BilateralSignal NetlistEvaluator::operand_value(const Operand& op) const {
    BilateralSignal acc;
    for (const auto& t : op) {
        BilateralSignal s;
        switch (t.signal.src) {
            case SignalRef::Src::core: s = (*core_rails_)[t.signal.index]; break;
            case SignalRef::Src::block: s = block_out_[t.signal.index]; break;
            case SignalRef::Src::input: s = input_rails_[t.signal.index]; break;
            case SignalRef::Src::constant: s = const_rails_[t.signal.index]; break;
        }
        acc += t.sign > 0 ? s : s.negated();
    }
    return acc;
}

void NetlistEvaluator::eval(const std::vector<BilateralSignal>& core_rails,
                            const std::vector<double>& input_values,
                            std::vector<BilateralSignal>& f_out) {
    core_rails_ = &core_rails;
    for (size_t i = 0; i < input_rails_.size(); ++i)
        input_rails_[i] = splitter(input_values[i]);

    for (size_t i = 0; i < netlist_.blocks.size(); ++i) {
        const BlockInst& b = netlist_.blocks[i];
        switch (b.kind) {
            case BlockKind::split:
                block_out_[i] = splitter(operand_value(b.operands[0]).value());
                break;
            case BlockKind::sq1: {
                const double v = operand_value(b.operands[0]).value();
                block_out_[i] = {squarer_type1(v, ScaleCurrent(b.scale)), 0.0};
                break;
            }
            case BlockKind::sq2:
                block_out_[i] = {squarer_type2(operand_value(b.operands[0]),
                                               ScaleCurrent(b.scale)),
                                 0.0};
                break;
            case BlockKind::mult1p:
            case BlockKind::mult1n:
                block_out_[i] = {mult_type1(operand_value(b.operands[0]).value(),
                                            operand_value(b.operands[1]).value(),
                                            ScaleCurrent(b.scale)),
                                 0.0};
                break;
            case BlockKind::mult2:
                block_out_[i] = mult_type2(operand_value(b.operands[0]).value(),
                                           operand_value(b.operands[1]),
                                           ScaleCurrent(b.scale));
                break;
            case BlockKind::mult3:
                block_out_[i] = mult_type3(operand_value(b.operands[0]),
                                           operand_value(b.operands[1]),
                                           ScaleCurrent(b.scale));
                break;
            case BlockKind::bmult:
                block_out_[i] = bilateral_mult_si(operand_value(b.operands[0]),
                                                  operand_value(b.operands[1]),
                                                  ScaleCurrent(b.scale));
                break;
            case BlockKind::rootsq:
            case BlockKind::multcore:
            case BlockKind::mirror:
                // structural nodes: mirrors copy, core denominators are
                // folded into the I_Cin computation
                block_out_[i] = operand_value(b.operands[0]);
                break;
        }
    }

    f_out.resize(netlist_.cores.size());
    for (size_t i = 0; i < netlist_.cores.size(); ++i)
        f_out[i] = operand_value(netlist_.cores[i].f);
    core_rails_ = nullptr;
}

std::vector<BilateralSignal> eval_netlist(const Netlist& n,
                                          const std::vector<BilateralSignal>& core_rails,
                                          const std::vector<double>& input_values) {
    NetlistEvaluator ev(n);
    std::vector<BilateralSignal> out;
    ev.eval(core_rails, input_values, out);
    return out;
}

namespace {

const char* src_name(SignalRef::Src s) {
    switch (s) {
        case SignalRef::Src::core: return "core";
        case SignalRef::Src::block: return "block";
        case SignalRef::Src::input: return "input";
        case SignalRef::Src::constant: return "const";
    }
    return "?";
}

SignalRef::Src src_from_name(const std::string& s) {
    if (s == "core") return SignalRef::Src::core;
    if (s == "block") return SignalRef::Src::block;
    if (s == "input") return SignalRef::Src::input;
    if (s == "const") return SignalRef::Src::constant;
    throw ValidationError("unknown signal source '" + s + "'");
}

ordered_json operand_json(const Operand& op) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : op)
        arr.push_back({{"src", src_name(t.signal.src)},
                       {"index", t.signal.index},
                       {"sign", t.sign}});
    return arr;
}

Operand operand_from_json(const ordered_json& arr) {
    Operand op;
    for (const auto& t : arr)
        op.push_back({{src_from_name(t.at("src").get<std::string>()),
                       t.at("index").get<int>()},
                      t.at("sign").get<int>()});
    return op;
}

ordered_json drive_json(const DriveSpec& d) {
    ordered_json j;
    switch (d.kind) {
        case DriveSpec::Kind::constant:
            j["kind"] = "constant";
            j["amplitude"] = d.amplitude;
            break;
        case DriveSpec::Kind::step:
            j["kind"] = "step";
            j["t0"] = d.t0;
            j["amplitude"] = d.amplitude;
            break;
        case DriveSpec::Kind::pulse:
            j["kind"] = "pulse";
            j["t0"] = d.t0;
            j["width"] = d.width;
            j["amplitude"] = d.amplitude;
            break;
        case DriveSpec::Kind::ramp:
            j["kind"] = "ramp";
            j["rate"] = d.rate;
            break;
        case DriveSpec::Kind::pwl: {
            j["kind"] = "pwl";
            ordered_json pts = ordered_json::array();
            for (const auto& [t, a] : d.points) pts.push_back({t, a});
            j["points"] = std::move(pts);
            break;
        }
    }
    return j;
}

DriveSpec drive_from_json(const ordered_json& j) {
    DriveSpec d;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        d.kind = DriveSpec::Kind::constant;
        d.amplitude = j.at("amplitude").get<double>();
    } else if (kind == "step") {
        d.kind = DriveSpec::Kind::step;
        d.t0 = j.at("t0").get<double>();
        d.amplitude = j.at("amplitude").get<double>();
    } else if (kind == "pulse") {
        d.kind = DriveSpec::Kind::pulse;
        d.t0 = j.at("t0").get<double>();
        d.width = j.at("width").get<double>();
        d.amplitude = j.at("amplitude").get<double>();
    } else if (kind == "ramp") {
        d.kind = DriveSpec::Kind::ramp;
        d.rate = j.at("rate").get<double>();
    } else if (kind == "pwl") {
        d.kind = DriveSpec::Kind::pwl;
        for (const auto& p : j.at("points"))
            d.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    } else {
        throw ValidationError("unknown drive kind '" + kind + "'");
    }
    return d;
}

}  // namespace

std::string emit(const Netlist& n) {
    ordered_json j;
    j["schema"] = "nbds-netlist/1";
    j["system"] = n.system;
    j["regime"] = n.regime == Regime::subthreshold ? "subthreshold" : "strong_inversion";
    ordered_json dev;
    dev["subthreshold"] = {{"n_n", n.device.sub.n_n},   {"n_p", n.device.sub.n_p},
                           {"v_t", n.device.sub.v_t},   {"i_sn", n.device.sub.i_sn},
                           {"i_sp", n.device.sub.i_sp}, {"v_dd", n.device.sub.v_dd},
                           {"v_b", n.device.sub.v_b}};
    dev["strong_inversion"] = {{"k_n", n.device.si.k_n},
                               {"k_p", n.device.si.k_p},
                               {"v_th", n.device.si.v_th},
                               {"v_dd", n.device.si.v_dd},
                               {"v_b", n.device.si.v_b}};
    j["device"] = std::move(dev);

    ordered_json cores = ordered_json::array();
    for (const auto& c : n.cores) {
        ordered_json cj;
        cj["name"] = c.state;
        cj["tau"] = c.mapping.tau;
        cj["c"] = c.mapping.c;
        cj["idc"] = c.mapping.i_dc;
        cj["mapping_constant"] =
            c.mapping.mapping_constant == MappingConstant::paper ? "paper" : "derived";
        cj["init"] = c.init;
        cj["f"] = operand_json(c.f);
        cores.push_back(std::move(cj));
    }
    j["cores"] = std::move(cores);

    ordered_json inputs = ordered_json::array();
    for (size_t i = 0; i < n.input_names.size(); ++i)
        inputs.push_back({{"name", n.input_names[i]}, {"drive", drive_json(n.input_drives[i])}});
    j["inputs"] = std::move(inputs);
    j["consts"] = n.const_sources;

    ordered_json blocks = ordered_json::array();
    for (size_t i = 0; i < n.blocks.size(); ++i) {
        const auto& b = n.blocks[i];
        ordered_json bj;
        bj["id"] = i;
        bj["kind"] = block_kind_name(b.kind);
        bj["scale"] = b.scale;
        ordered_json ops = ordered_json::array();
        for (const auto& op : b.operands) ops.push_back(operand_json(op));
        bj["operands"] = std::move(ops);
        blocks.push_back(std::move(bj));
    }
    j["blocks"] = std::move(blocks);
    return j.dump(2) + "\n";
}

Netlist netlist_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    if (j.at("schema").get<std::string>() != "nbds-netlist/1")
        throw ValidationError("unsupported netlist schema");
    Netlist n;
    n.system = j.at("system").get<std::string>();
    n.regime = j.at("regime").get<std::string>() == "subthreshold"
                   ? Regime::subthreshold
                   : Regime::strong_inversion;
    n.device.regime = n.regime;
    const auto& sub = j.at("device").at("subthreshold");
    n.device.sub = {sub.at("n_n").get<double>(),  sub.at("n_p").get<double>(),
                    sub.at("v_t").get<double>(),  sub.at("i_sn").get<double>(),
                    sub.at("i_sp").get<double>(), sub.at("v_dd").get<double>(),
                    sub.at("v_b").get<double>()};
    const auto& si = j.at("device").at("strong_inversion");
    n.device.si = {si.at("k_n").get<double>(), si.at("k_p").get<double>(),
                   si.at("v_th").get<double>(), si.at("v_dd").get<double>(),
                   si.at("v_b").get<double>()};
    for (const auto& cj : j.at("cores")) {
        CoreInst c;
        c.state = cj.at("name").get<std::string>();
        c.mapping.regime = n.regime;
        c.mapping.tau = cj.at("tau").get<double>();
        c.mapping.c = cj.at("c").get<double>();
        c.mapping.i_dc = cj.at("idc").get<double>();
        c.mapping.mapping_constant = cj.at("mapping_constant").get<std::string>() == "paper"
                                         ? MappingConstant::paper
                                         : MappingConstant::derived;
        c.init = cj.at("init").get<double>();
        c.f = operand_from_json(cj.at("f"));
        n.cores.push_back(std::move(c));
    }
    for (const auto& ij : j.at("inputs")) {
        n.input_names.push_back(ij.at("name").get<std::string>());
        n.input_drives.push_back(drive_from_json(ij.at("drive")));
    }
    n.const_sources = j.at("consts").get<std::vector<double>>();
    for (const auto& bj : j.at("blocks")) {
        BlockInst b;
        b.kind = block_kind_from_name(bj.at("kind").get<std::string>());
        b.scale = bj.at("scale").get<double>();
        for (const auto& op : bj.at("operands")) b.operands.push_back(operand_from_json(op));
        n.blocks.push_back(std::move(b));
    }
    return n;
}

}  // namespace nbds

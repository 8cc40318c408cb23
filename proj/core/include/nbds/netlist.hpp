#pragma once

#include <map>
#include <string>
#include <vector>

#include "nbds/core.hpp"
#include "nbds/system.hpp"

namespace nbds {

enum class BlockKind {
    mult1p,
    mult1n,
    sq1,
    sq2,
    mult2,
    mult3,
    split,
    rootsq,
    multcore,
    bmult,
    mirror,
};

std::string block_kind_name(BlockKind k);
BlockKind block_kind_from_name(const std::string& s);

/// Sign classification of an expression node: single_sided values travel on
/// one rail, bilateral ones on two.
enum class SignClass { single_sided, bilateral };

SignClass classify(const Expr& e);

/// Reference to a rail-pair source within a netlist.
struct SignalRef {
    enum class Src { core, block, input, constant };
    Src src = Src::core;
    int index = 0;

    friend bool operator==(const SignalRef&, const SignalRef&) = default;
    friend auto operator<=>(const SignalRef&, const SignalRef&) = default;
};

/// One KCL contribution: a signal attached with polarity. Negation is rail
/// rewiring (pos and neg swapped), so sums and differences cost no blocks.
struct Term {
    SignalRef signal;
    int sign = 1;  // +1 or -1
};

/// A block input: the wired-OR of its contributions.
using Operand = std::vector<Term>;

/// A computation block instance. Operand order is semantic: TYPE2 takes
/// (single-sided, bilateral); splitters take the raw external input.
struct BlockInst {
    BlockKind kind;
    double scale = 0.0;  ///< bound scale current [A], 0 when not applicable
    std::vector<Operand> operands;
};

/// One main core: the state it realizes, its mapping, and the rail bundle
/// terminating at its I_Cin multipliers.
struct CoreInst {
    std::string state;
    CoreMapping mapping;
    double init = 0.0;  ///< initial output current [A]
    Operand f;          ///< the F_i rail sum
};

struct Netlist {
    std::string system;
    Regime regime = Regime::subthreshold;
    Device device{};
    std::vector<CoreInst> cores;
    std::vector<std::string> input_names;
    std::vector<DriveSpec> input_drives;
    std::vector<double> const_sources;  ///< magnitudes, all > 0
    std::vector<BlockInst> blocks;      ///< creation order == evaluation order

    int count(BlockKind k) const;
    int mirror_count() const { return count(BlockKind::mirror); }
    const CoreInst* find_core(const std::string& state) const;
};

/// Lowers a validated system to a netlist of cores, TL blocks, splitters,
/// and mirrors. Deterministic; shares syntactically identical subtrees.
Netlist lower(const DynSystem& sys, MappingConstant mapping = MappingConstant::paper);

/// One topological sweep of the block graph: from per-state core readout
/// rails and external input values to per-state F rails.
std::vector<BilateralSignal> eval_netlist(const Netlist& n,
                                          const std::vector<BilateralSignal>& core_rails,
                                          const std::vector<double>& input_values);

/// Reusable evaluation workspace for hot loops (integration, Monte Carlo).
class NetlistEvaluator {
public:
    explicit NetlistEvaluator(const Netlist& n);

    /// Writes per-core F rails into f_out (resized to core count).
    void eval(const std::vector<BilateralSignal>& core_rails,
              const std::vector<double>& input_values,
              std::vector<BilateralSignal>& f_out);

private:
    BilateralSignal operand_value(const Operand& op) const;

    const Netlist& netlist_;
    std::vector<BilateralSignal> block_out_;
    std::vector<BilateralSignal> const_rails_;
    const std::vector<BilateralSignal>* core_rails_ = nullptr;
    std::vector<BilateralSignal> input_rails_;
};

/// Deterministic JSON document ("nbds-netlist/1"); byte-identical across
/// runs for identical input.
std::string emit(const Netlist& n);

/// Inverse of emit, for round-trip checks and file interchange.
Netlist netlist_from_json(const std::string& text);

}  // namespace nbds

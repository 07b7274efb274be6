#pragma once

#include <array>
#include <optional>

#include "uenc/garble.hpp"
#include "uenc/hybrid_circuit.hpp"

namespace uenc {

// Decomposable quantum randomized encoding for the restricted HybridCircuit
// class. Per qubit the encoder prepares two teleportation resources
// (I (x) G_{i,c})|EPR>, one per control value, quantum-one-time-pads all
// halves, and stores them at positions permuted by the control wire's
// point-and-permute bit. Corrections and postprocessing are folded into one
// garbled boolean circuit F whose (u, v, y) measurement wires carry open
// (both-revealed) labels. Classical-label derivation reads only the
// randomness r, never the resource states.

enum class DqreMode { Garbled, Transparent };

struct DqreParams {
    GarbleParams gc;
    DqreMode mode = DqreMode::Garbled;
};

// The classical randomness r of the encoding.
struct DqreRandomness {
    GarbleRandomness f_wires;  // labels for every wire of F; wires 0..lc-1 are
                               // the classical inputs
    struct QubitKeys {
        int a = 0, bz = 0;                    // input-label QOTP
        std::array<int, 2> h1x{}, h1z{};      // per semantic branch c
        std::array<int, 2> h2x{}, h2z{};
    };
    std::vector<QubitKeys> qubits;
};

struct DqreBundle {
    DqreParams params;
    HybridCircuit::Shape shape;
    std::vector<int> controls;  // per qubit

    // Garbled mode payload.
    GarbledCircuit f;
    // Open labels for wires lc+3i+{0,1,2} = (u_i, v_i, y_i), both values.
    std::vector<std::array<GcLabel, 2>> open_labels;  // indexed by 3*i + k
    // Branch resources per qubit, indexed by storage position; registers are
    // (H1, H2), already one-time-padded.
    std::vector<std::array<PureState, 2>> resources;

    // Transparent mode carries the circuit itself.
    std::optional<HybridCircuit> plain;
};

struct DqreEncoding {
    DqreBundle bundle;
    DqreRandomness r;
};

// Enc(1^lambda, C) -> (C_hat, r). The resource state sigma of the definition
// is empty in this instantiation; branch resources live inside the bundle.
DqreEncoding dqre_encode(const HybridCircuit& c, const DqreParams& params, RngStream& rng);

// Lab^c: classical label for input bit i; a pure function of (i, x_i, r).
GcLabel dqre_label_c(const DqreRandomness& r, int i, int bit);

// Lab^q: one-time-pad register I{i} of the caller's state in place.
PureState dqre_label_q(const DqreRandomness& r, int i, const PureState& state);

// Re-derive the branch resource states from r (they are a pure function of
// it); used to demonstrate that classical labels ignore the resources.
void dqre_rebuild_resources(DqreBundle& bundle, const DqreRandomness& r);

// Dec: `state` holds the padded label registers I0..I{lq-1}, possibly
// entangled with side registers that pass through.
struct DqreEvalResult {
    Bits output;
    std::optional<PureState> side;
    Bits open_u, open_v, open_y;  // per-qubit measurement record
};
DqreEvalResult dqre_eval_sampled(const DqreBundle& bundle, const PureState& state,
                                 const std::vector<GcLabel>& clabels, RngStream& rng);

// Exact channel over (O0..O{k-1}, side registers), enumerating every
// measurement branch.
DensityMatrix dqre_eval_exact(const DqreBundle& bundle, const PureState& state,
                              const std::vector<GcLabel>& clabels);

// Indistinguishability check between two (circuit, input) pairs whose direct
// outputs are equal as density matrices.
struct IndistInput {
    HybridCircuit circuit;
    Bits x;
    PureState qinputs;  // registers I0..I{lq-1} only
};

struct IndistReport {
    bool precondition_ok = false;
    double precondition_distance = 0.0;
    bool shape_ok = false;
    struct Line {
        std::string name;
        double p_first = 0.0, p_second = 0.0;
        double advantage = 0.0;
        double ci95 = 0.0;  // half-width for the advantage
    };
    std::vector<Line> battery;
    double max_advantage = 0.0;
};

IndistReport dqre_indist_check(const IndistInput& a, const IndistInput& b, const DqreParams& params, int trials,
                               RngStream& rng);

}  // namespace uenc

#include "uenc/dqre.hpp"

#include <cmath>

namespace uenc {

namespace {

// F wiring, fixed per circuit shape. Inputs: lc classical wires, then
// (u_i, v_i, y_i) per qubit. Preamble builds constant-0/1 wires; each qubit
// gets a 12-gate correction block; the post circuit is appended with its
// inputs remapped to (corrected outcomes, classical wires). All key bits and
// message constants enter through gate-op choices on this fixed wiring, so
// same-shape circuits garble to byte-compatible tables.
struct FWiring {
    int lc = 0, lq = 0;
    int n_in = 0;
    int zero_w = 0, one_w = 0;

    explicit FWiring(int lq_, int lc_) : lc(lc_), lq(lq_) {
        n_in = lc + 3 * lq;
        zero_w = n_in;
        one_w = n_in + 1;
    }
    int u_wire(int i) const { return lc + 3 * i; }
    int v_wire(int i) const { return lc + 3 * i + 1; }
    int y_wire(int i) const { return lc + 3 * i + 2; }
    int block_base(int i) const { return n_in + 2 + 12 * i; }
    int x_wire(int i) const { return block_base(i) + 11; }
    int post_base() const { return n_in + 2 + 12 * lq; }
};

GateOp keep_op(int keep) { return keep ? GateOp::Xor : GateOp::And; }   // OP(w, 0): keep ? w : 0
GateOp flip_op(int flip) { return flip ? GateOp::Xor : GateOp::And; }   // OP(w, 1): flip ? ~w : w

BoolCircuit build_f(const HybridCircuit& c, const std::vector<DqreRandomness::QubitKeys>& keys) {
    FWiring w(c.lq, c.lc);
    BoolCircuit f;
    f.n_inputs = w.n_in;
    f.gates.push_back({GateOp::Xor, 0, 0});        // zero
    f.gates.push_back({GateOp::Not, w.zero_w, 0});  // one

    for (int i = 0; i < c.lq; ++i) {
        const auto& k = keys[i];
        const auto& slot = c.slots[i];
        int base = w.block_base(i);
        for (int br = 0; br < 2; ++br) {
            const CliffordGate& g = br ? slot.g1 : slot.g0;
            int mu = g.xexp_of_conj_x();
            int mv = g.xexp_of_conj_z();
            int cc = (k.h2x[br] ^ (mu & (k.h1x[br] ^ k.a)) ^ (mv & (k.h1z[br] ^ k.bz))) & 1;
            int off = base + 4 * br;
            f.gates.push_back({keep_op(mu), w.u_wire(i), w.zero_w});  // off+0
            f.gates.push_back({keep_op(mv), w.v_wire(i), w.zero_w});  // off+1
            f.gates.push_back({GateOp::Xor, off, off + 1});           // off+2
            f.gates.push_back({flip_op(cc), off + 2, w.one_w});       // off+3 = K_br
        }
        int k0 = base + 3, k1 = base + 7;
        f.gates.push_back({GateOp::Xor, k0, k1});                          // base+8 = d
        f.gates.push_back({GateOp::And, slot.control, base + 8});         // base+9 = e
        f.gates.push_back({GateOp::Xor, k0, base + 9});                    // base+10
        f.gates.push_back({GateOp::Xor, w.y_wire(i), base + 10});          // base+11 = x_i
    }

    // Post circuit, remapped: input j -> x_j for j < lq, classical wire
    // otherwise; internal wires shifted.
    auto remap = [&](int wire) {
        if (wire < c.lq) return w.x_wire(wire);
        if (wire < c.lq + c.lc) return wire - c.lq;
        return w.post_base() + (wire - (c.lq + c.lc));
    };
    for (const auto& g : c.post.gates) {
        BoolGate ng = g;
        ng.a = remap(g.a);
        if (g.op != GateOp::Not) ng.b = remap(g.b);
        f.gates.push_back(ng);
    }
    for (int o : c.post.outputs) f.outputs.push_back(remap(o));
    f.validate();
    return f;
}

PureState build_resource(const CliffordGate& g, int h1x, int h1z, int h2x, int h2z) {
    RegisterLayout lay = RegisterLayout::qubits({"H1", "H2"});
    Vec epr = Vec::Zero(4);
    epr(0) = epr(3) = 1.0 / std::sqrt(2.0);
    PureState st(lay, epr);
    st = apply(UnitaryOp(g.matrix()), st, {"H2"});
    if (h1x) st = apply(UnitaryOp(pauli_x()), st, {"H1"});
    if (h1z) st = apply(UnitaryOp(pauli_z()), st, {"H1"});
    if (h2x) st = apply(UnitaryOp(pauli_x()), st, {"H2"});
    if (h2z) st = apply(UnitaryOp(pauli_z()), st, {"H2"});
    return st;
}

const Mat& cnot_matrix() {
    static const Mat m = [] {
        Mat c = Mat::Zero(4, 4);
        c(0, 0) = c(1, 1) = c(3, 2) = c(2, 3) = 1.0;
        return c;
    }();
    return m;
}

std::string h1_reg(int i) { return "H1#" + std::to_string(i); }
std::string h2_reg(int i) { return "H2#" + std::to_string(i); }

std::vector<std::string> side_registers_of(const DqreBundle& bundle, const PureState& state) {
    std::vector<std::string> side;
    for (size_t r = 0; r < state.layout().num_registers(); ++r) {
        const std::string& n = state.layout().name(r);
        bool is_input = false;
        for (int q = 0; q < bundle.shape.lq; ++q)
            if (n == HybridCircuit::input_register(q)) is_input = true;
        if (!is_input) side.push_back(n);
    }
    return side;
}

std::vector<GcLabel> assemble_f_labels(const DqreBundle& bundle, const std::vector<GcLabel>& clabels, const Bits& u,
                                       const Bits& v, const Bits& y) {
    std::vector<GcLabel> labels = clabels;
    for (int i = 0; i < bundle.shape.lq; ++i) {
        labels.push_back(bundle.open_labels[3 * i][u[i]]);
        labels.push_back(bundle.open_labels[3 * i + 1][v[i]]);
        labels.push_back(bundle.open_labels[3 * i + 2][y[i]]);
    }
    return labels;
}

Bits bits_from_ptrs(const std::vector<GcLabel>& clabels) {
    Bits x(clabels.size());
    for (size_t i = 0; i < clabels.size(); ++i) x.set(i, clabels[i].ptr);
    return x;
}

}  // namespace

DqreEncoding dqre_encode(const HybridCircuit& c, const DqreParams& params, RngStream& rng) {
    c.validate();
    DqreEncoding enc;
    enc.bundle.params = params;
    enc.bundle.shape = c.shape();
    for (const auto& s : c.slots) enc.bundle.controls.push_back(s.control);

    if (params.mode == DqreMode::Transparent) {
        enc.bundle.plain = c;
        enc.r.qubits.resize(c.lq);
        enc.r.f_wires.wires.resize(c.lc);
        for (int i = 0; i < c.lc; ++i) {
            enc.r.f_wires.wires[i].l0 = GcLabel{Bits({0}), 0};
            enc.r.f_wires.wires[i].l1 = GcLabel{Bits({1}), 1};
        }
        return enc;
    }

    RngStream key_rng = rng.fork(0);
    enc.r.qubits.resize(c.lq);
    for (auto& k : enc.r.qubits) {
        k.a = key_rng.bit();
        k.bz = key_rng.bit();
        for (int br = 0; br < 2; ++br) {
            k.h1x[br] = key_rng.bit();
            k.h1z[br] = key_rng.bit();
            k.h2x[br] = key_rng.bit();
            k.h2z[br] = key_rng.bit();
        }
    }

    BoolCircuit f = build_f(c, enc.r.qubits);
    RngStream garble_rng = rng.fork(1);
    GarbledEncoding genc = dre_garble(f, params.gc, garble_rng);
    enc.bundle.f = std::move(genc.gc);
    enc.r.f_wires = std::move(genc.r);

    FWiring w(c.lq, c.lc);
    for (int i = 0; i < c.lq; ++i) {
        std::array<GcLabel, 2> u{enc.r.f_wires.wires[w.u_wire(i)].l0, enc.r.f_wires.wires[w.u_wire(i)].l1};
        std::array<GcLabel, 2> v{enc.r.f_wires.wires[w.v_wire(i)].l0, enc.r.f_wires.wires[w.v_wire(i)].l1};
        std::array<GcLabel, 2> y{enc.r.f_wires.wires[w.y_wire(i)].l0, enc.r.f_wires.wires[w.y_wire(i)].l1};
        enc.bundle.open_labels.push_back(u);
        enc.bundle.open_labels.push_back(v);
        enc.bundle.open_labels.push_back(y);
    }

    // Branch resources; slot position = semantic branch xor the control
    // wire's permute bit, so the released pointer reveals nothing.
    enc.bundle.resources.resize(c.lq);
    dqre_rebuild_resources(enc.bundle, enc.r);
    // Stash gates for resource rebuilds (they are circuit data, not secrets
    // beyond what the garbled tables hide; rebuilds are a test hook).
    enc.bundle.plain = c;
    return enc;
}

void dqre_rebuild_resources(DqreBundle& bundle, const DqreRandomness& r) {
    if (bundle.params.mode == DqreMode::Transparent) return;
    const HybridCircuit& c = *bundle.plain;
    bundle.resources.resize(c.lq);
    for (int i = 0; i < c.lq; ++i) {
        int perm = r.f_wires.wires[bundle.controls[i]].perm();
        for (int pos = 0; pos < 2; ++pos) {
            int br = pos ^ perm;
            const CliffordGate& g = br ? c.slots[i].g1 : c.slots[i].g0;
            const auto& k = r.qubits[i];
            bundle.resources[i][pos] = build_resource(g, k.h1x[br], k.h1z[br], k.h2x[br], k.h2z[br]);
        }
    }
}

GcLabel dqre_label_c(const DqreRandomness& r, int i, int bit) { return r.f_wires.wires.at(i).for_bit(bit); }

PureState dqre_label_q(const DqreRandomness& r, int i, const PureState& state) {
    const auto& k = r.qubits.at(i);
    PureState out = state;
    std::string reg = HybridCircuit::input_register(i);
    if (k.bz) out = apply(UnitaryOp(pauli_z()), out, {reg});
    if (k.a) out = apply(UnitaryOp(pauli_x()), out, {reg});
    return out;
}

namespace {

struct EvalContext {
    const DqreBundle& bundle;
    std::vector<GcLabel> clabels;
};

// Teleport qubit i through its pointed branch; consumes registers. Outcomes:
// v from the input wire (phase), u from the resource half (bit), y from the
// second half.
struct TeleportStep {
    PureState state;
    double prob = 1.0;
    int u = 0, v = 0, y = 0;
};

std::vector<TeleportStep> teleport_branches(const EvalContext& ctx, int i, const PureState& cur, bool sample,
                                            RngStream* rng) {
    const auto& bundle = ctx.bundle;
    int ptr = ctx.clabels[bundle.controls[i]].ptr;
    PureState res = bundle.resources[i][ptr];
    RegisterLayout rlay = RegisterLayout::qubits({h1_reg(i), h2_reg(i)});
    PureState joined = tensor(cur, PureState(rlay, res.amplitudes()));
    std::string ireg = HybridCircuit::input_register(i);
    joined = apply(UnitaryOp(cnot_matrix()), joined, {ireg, h1_reg(i)});
    joined = apply(UnitaryOp(hadamard()), joined, {ireg});

    std::vector<TeleportStep> steps;
    if (sample) {
        auto bell = measure_computational(joined, {ireg, h1_reg(i)}, *rng);
        PureState afterbell = remove_basis_registers(bell.post, {ireg, h1_reg(i)});
        auto meas = measure_computational(afterbell, {h2_reg(i)}, *rng);
        TeleportStep st{remove_basis_registers(meas.post, {h2_reg(i)}), 1.0, bell.outcome[1], bell.outcome[0],
                        meas.outcome[0]};
        steps.push_back(std::move(st));
        return steps;
    }
    for (int v = 0; v < 2; ++v)
        for (int u = 0; u < 2; ++u) {
            auto [p1, st1] = project_outcome(joined, {ireg, h1_reg(i)}, {v, u});
            if (p1 < 1e-15) continue;
            PureState clean1 = remove_basis_registers(st1, {ireg, h1_reg(i)});
            for (int y = 0; y < 2; ++y) {
                auto [p2, st2] = project_outcome(clean1, {h2_reg(i)}, {y});
                if (p2 < 1e-15) continue;
                steps.push_back({remove_basis_registers(st2, {h2_reg(i)}), p1 * p2, u, v, y});
            }
        }
    return steps;
}

}  // namespace

DqreEvalResult dqre_eval_sampled(const DqreBundle& bundle, const PureState& state,
                                 const std::vector<GcLabel>& clabels, RngStream& rng) {
    if (static_cast<int>(clabels.size()) != bundle.shape.lc)
        throw std::invalid_argument("dqre_eval: wrong number of classical labels");
    auto side = side_registers_of(bundle, state);
    if (bundle.params.mode == DqreMode::Transparent) {
        auto run = hybrid_eval_sampled(*bundle.plain, state, bits_from_ptrs(clabels), rng);
        return {run.output, run.side, Bits(), Bits(), Bits()};
    }
    EvalContext ctx{bundle, clabels};
    PureState cur = state;
    Bits u(bundle.shape.lq), v(bundle.shape.lq), y(bundle.shape.lq);
    for (int i = 0; i < bundle.shape.lq; ++i) {
        auto steps = teleport_branches(ctx, i, cur, true, &rng);
        cur = steps[0].state;
        u.set(i, steps[0].u);
        v.set(i, steps[0].v);
        y.set(i, steps[0].y);
    }
    Bits out = dre_eval(bundle.f, assemble_f_labels(bundle, clabels, u, v, y));
    DqreEvalResult res{out, std::nullopt, u, v, y};
    if (!side.empty()) res.side = permute_registers(cur, side);
    return res;
}

DensityMatrix dqre_eval_exact(const DqreBundle& bundle, const PureState& state,
                              const std::vector<GcLabel>& clabels) {
    if (static_cast<int>(clabels.size()) != bundle.shape.lc)
        throw std::invalid_argument("dqre_eval: wrong number of classical labels");
    auto side = side_registers_of(bundle, state);
    if (bundle.params.mode == DqreMode::Transparent)
        return hybrid_eval_exact(*bundle.plain, state, bits_from_ptrs(clabels));

    RegisterLayout out_lay = RegisterLayout::qubit_range("O", bundle.shape.outs);
    if (!side.empty()) out_lay = out_lay.concat(state.layout().subset(side));
    Mat acc = Mat::Zero(out_lay.dim(), out_lay.dim());
    EvalContext ctx{bundle, clabels};

    struct Frame {
        PureState state;
        double prob;
        Bits u, v, y;
    };
    std::vector<Frame> frontier{{state, 1.0, Bits(bundle.shape.lq), Bits(bundle.shape.lq), Bits(bundle.shape.lq)}};
    for (int i = 0; i < bundle.shape.lq; ++i) {
        std::vector<Frame> next;
        for (auto& fr : frontier) {
            for (auto& st : teleport_branches(ctx, i, fr.state, false, nullptr)) {
                Frame nf{std::move(st.state), fr.prob * st.prob, fr.u, fr.v, fr.y};
                nf.u.set(i, st.u);
                nf.v.set(i, st.v);
                nf.y.set(i, st.y);
                next.push_back(std::move(nf));
            }
        }
        frontier = std::move(next);
    }

    for (const auto& fr : frontier) {
        Bits out = dre_eval(bundle.f, assemble_f_labels(bundle, clabels, fr.u, fr.v, fr.y));
        PureState out_ket = PureState::from_bits(RegisterLayout::qubit_range("O", bundle.shape.outs), out);
        if (!side.empty()) {
            PureState joint = tensor(out_ket, permute_registers(fr.state, side));
            acc += fr.prob * (joint.amplitudes() * joint.amplitudes().adjoint());
        } else {
            acc += fr.prob * (out_ket.amplitudes() * out_ket.amplitudes().adjoint());
        }
    }
    return DensityMatrix(std::move(out_lay), std::move(acc));
}

namespace {

bool post_shape_equal(const HybridCircuit& a, const HybridCircuit& b) {
    return shape_of(a.post) == shape_of(b.post);
}

}  // namespace

IndistReport dqre_indist_check(const IndistInput& a, const IndistInput& b, const DqreParams& params, int trials,
                               RngStream& rng) {
    IndistReport rep;
    rep.shape_ok = (a.circuit.shape() == b.circuit.shape()) && post_shape_equal(a.circuit, b.circuit);
    DensityMatrix da = hybrid_eval_exact(a.circuit, a.qinputs, a.x);
    DensityMatrix db = hybrid_eval_exact(b.circuit, b.qinputs, b.x);
    rep.precondition_distance = trace_distance(da, DensityMatrix(da.layout(), db.matrix()));
    rep.precondition_ok = rep.shape_ok && rep.precondition_distance < kStateTol;

    constexpr int kNumD = 7;
    const char* names[kNumD] = {"honest-eval-bit0", "clabel-ptr-parity", "qlabel-Z", "qlabel-X",
                                "u0-xor-v0",        "y0",                "row-bit0"};
    int counts[2][kNumD] = {};

    for (int sideidx = 0; sideidx < 2; ++sideidx) {
        const IndistInput& in = sideidx ? b : a;
        for (int t = 0; t < trials; ++t) {
            RngStream sub = rng.fork(static_cast<uint64_t>(sideidx) * trials + t);
            auto enc = dqre_encode(in.circuit, params, sub);
            PureState padded = in.qinputs;
            for (int i = 0; i < in.circuit.lq; ++i) padded = dqre_label_q(enc.r, i, padded);
            std::vector<GcLabel> clabels;
            for (int i = 0; i < in.circuit.lc; ++i) clabels.push_back(dqre_label_c(enc.r, i, in.x[i]));

            int ptr_parity = 0;
            for (const auto& l : clabels) ptr_parity ^= l.ptr;

            RngStream meas = sub.fork(1);
            auto zres = measure_computational(padded, {HybridCircuit::input_register(0)}, meas);
            PureState hpad = apply(UnitaryOp(hadamard()), padded, {HybridCircuit::input_register(0)});
            auto xres = measure_computational(hpad, {HybridCircuit::input_register(0)}, meas);

            RngStream evalrng = sub.fork(2);
            auto eval = dqre_eval_sampled(enc.bundle, padded, clabels, evalrng);

            counts[sideidx][0] += eval.output[0];
            counts[sideidx][1] += ptr_parity;
            counts[sideidx][2] += zres.outcome[0];
            counts[sideidx][3] += xres.outcome[0];
            counts[sideidx][4] += eval.open_u[0] ^ eval.open_v[0];
            counts[sideidx][5] += eval.open_y[0];
            counts[sideidx][6] += enc.bundle.f.gate_rows[0][0][0];
        }
    }

    for (int d = 0; d < kNumD; ++d) {
        IndistReport::Line line;
        line.name = names[d];
        line.p_first = counts[0][d] / static_cast<double>(trials);
        line.p_second = counts[1][d] / static_cast<double>(trials);
        line.advantage = std::abs(line.p_first - line.p_second);
        line.ci95 = 1.959964 * std::sqrt(line.p_first * (1 - line.p_first) / trials +
                                         line.p_second * (1 - line.p_second) / trials);
        rep.max_advantage = std::max(rep.max_advantage, line.advantage);
        rep.battery.push_back(std::move(line));
    }
    return rep;
}

}  // namespace uenc

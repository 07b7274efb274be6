#include "uenc/hybrid_circuit.hpp"

#include <json.hpp>

namespace uenc {

namespace {

// Match C against phase * X^x Z^z; returns (x, z) or throws.
std::pair<int, int> pauli_type(const Mat& c) {
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            Mat q = Mat::Identity(2, 2);
            if (x) q = pauli_x() * q;
            if (z) q = q * pauli_z();  // X^x Z^z
            // Find a nonzero reference entry.
            long ri = 0, rj = 0;
            for (long i = 0; i < 2; ++i)
                for (long j = 0; j < 2; ++j)
                    if (std::abs(q(i, j)) > 0.5) {
                        ri = i;
                        rj = j;
                    }
            cx phase = c(ri, rj) / q(ri, rj);
            if (std::abs(std::abs(phase) - 1.0) > 1e-9) continue;
            if ((c - phase * q).cwiseAbs().maxCoeff() < 1e-9) return {x, z};
        }
    throw std::invalid_argument("CliffordGate: conjugation does not map Paulis to Paulis (outside class)");
}

}  // namespace

CliffordGate::CliffordGate(Mat u, std::string name) : u_(std::move(u)), name_(std::move(name)) {
    if (u_.rows() != 2 || u_.cols() != 2) throw std::invalid_argument("CliffordGate: 2x2 matrix required");
    if ((u_ * u_.adjoint() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > kStateTol)
        throw std::invalid_argument("CliffordGate: not unitary");
    gx_ = pauli_type(u_ * pauli_x() * u_.adjoint()).first;
    gz_ = pauli_type(u_ * pauli_z() * u_.adjoint()).first;
}

CliffordGate CliffordGate::identity() { return CliffordGate(Mat::Identity(2, 2), "I"); }
CliffordGate CliffordGate::h() { return CliffordGate(hadamard(), "H"); }
CliffordGate CliffordGate::x() { return CliffordGate(pauli_x(), "X"); }
CliffordGate CliffordGate::z() { return CliffordGate(pauli_z(), "Z"); }
CliffordGate CliffordGate::s() {
    Mat m = Mat::Identity(2, 2);
    m(1, 1) = cx(0, 1);
    return CliffordGate(std::move(m), "S");
}

void HybridCircuit::validate() const {
    if (lq < 1 || lc < 1) throw std::invalid_argument("HybridCircuit: lq, lc >= 1 required");
    if (static_cast<int>(slots.size()) != lq) throw std::invalid_argument("HybridCircuit: one slot per qubit");
    for (const auto& s : slots)
        if (s.control < 0 || s.control >= lc) throw std::invalid_argument("HybridCircuit: control index out of range");
    if (post.n_inputs != lq + lc) throw std::invalid_argument("HybridCircuit: post arity must be lq + lc");
    post.validate();
    if (post.outputs.empty()) throw std::invalid_argument("HybridCircuit: at least one output");
}

HybridCircuit::Shape HybridCircuit::shape() const {
    Shape s;
    s.lq = lq;
    s.lc = lc;
    for (const auto& slot : slots) s.controls.push_back(slot.control);
    s.post_gates = post.size();
    s.outs = out_count();
    return s;
}

std::vector<std::string> HybridCircuit::input_registers() const {
    std::vector<std::string> names;
    for (int i = 0; i < lq; ++i) names.push_back(input_register(i));
    return names;
}

namespace {

PureState apply_slots(const HybridCircuit& c, const PureState& state, const Bits& x) {
    PureState cur = state;
    for (int i = 0; i < c.lq; ++i) {
        const auto& slot = c.slots[i];
        const CliffordGate& g = x[slot.control] ? slot.g1 : slot.g0;
        cur = apply(UnitaryOp(g.matrix()), cur, {HybridCircuit::input_register(i)});
    }
    return cur;
}

Bits post_input(const HybridCircuit& c, const Bits& y, const Bits& x) {
    Bits in = y;
    in.append(x);
    return in;
}

std::vector<std::string> side_registers(const HybridCircuit& c, const PureState& state) {
    std::vector<std::string> side;
    for (size_t i = 0; i < state.layout().num_registers(); ++i) {
        const std::string& n = state.layout().name(i);
        bool is_input = false;
        for (int q = 0; q < c.lq; ++q)
            if (n == HybridCircuit::input_register(q)) is_input = true;
        if (!is_input) side.push_back(n);
    }
    return side;
}

}  // namespace

DensityMatrix hybrid_eval_exact(const HybridCircuit& c, const PureState& state, const Bits& x) {
    c.validate();
    if (static_cast<int>(x.size()) != c.lc) throw std::invalid_argument("hybrid_eval_exact: classical input mismatch");
    PureState rotated = apply_slots(c, state, x);
    auto inputs = c.input_registers();
    auto side = side_registers(c, state);

    RegisterLayout out_lay = RegisterLayout::qubit_range("O", c.out_count());
    if (!side.empty()) out_lay = out_lay.concat(state.layout().subset(side));
    Mat acc = Mat::Zero(out_lay.dim(), out_lay.dim());

    long branches = 1L << c.lq;
    for (long yi = 0; yi < branches; ++yi) {
        std::vector<long> digits(c.lq);
        Bits y(c.lq);
        for (int i = 0; i < c.lq; ++i) {
            digits[i] = (yi >> (c.lq - 1 - i)) & 1;
            y.set(i, static_cast<int>(digits[i]));
        }
        auto [p, post_state] = project_outcome(rotated, inputs, digits);
        if (p < 1e-15) continue;
        Bits out = c.post.eval(post_input(c, y, x));
        PureState out_ket = PureState::from_bits(RegisterLayout::qubit_range("O", c.out_count()), out);
        if (!side.empty()) {
            PureState side_state = remove_basis_registers(post_state, inputs);
            PureState joint = tensor(out_ket, permute_registers(side_state, side));
            acc += p * (joint.amplitudes() * joint.amplitudes().adjoint());
        } else {
            acc += p * (out_ket.amplitudes() * out_ket.amplitudes().adjoint());
        }
    }
    return DensityMatrix(std::move(out_lay), std::move(acc));
}

HybridRunResult hybrid_eval_sampled(const HybridCircuit& c, const PureState& state, const Bits& x, RngStream& rng) {
    c.validate();
    if (static_cast<int>(x.size()) != c.lc) throw std::invalid_argument("hybrid_eval_sampled: classical input mismatch");
    PureState rotated = apply_slots(c, state, x);
    auto inputs = c.input_registers();
    auto side = side_registers(c, state);
    auto res = measure_computational(rotated, inputs, rng);
    HybridRunResult out;
    out.output = c.post.eval(post_input(c, res.outcome, x));
    if (!side.empty()) out.side = remove_basis_registers(res.post, inputs);
    return out;
}

// ---- JSON corpus format ----

namespace {

nlohmann::json gate_json(const CliffordGate& g) {
    if (!g.name().empty()) return g.name();
    nlohmann::json m = nlohmann::json::array();
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) m.push_back({g.matrix()(i, j).real(), g.matrix()(i, j).imag()});
    return m;
}

CliffordGate gate_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string n = j.get<std::string>();
        if (n == "I") return CliffordGate::identity();
        if (n == "H") return CliffordGate::h();
        if (n == "X") return CliffordGate::x();
        if (n == "Z") return CliffordGate::z();
        if (n == "S") return CliffordGate::s();
        throw std::invalid_argument("unknown gate name " + n);
    }
    Mat m(2, 2);
    for (long i = 0; i < 2; ++i)
        for (long j2 = 0; j2 < 2; ++j2) {
            auto& e = j.at(i * 2 + j2);
            m(i, j2) = cx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return CliffordGate(std::move(m));
}

std::string op_name(GateOp op) {
    switch (op) {
        case GateOp::And: return "and";
        case GateOp::Xor: return "xor";
        case GateOp::Not: return "not";
    }
    return "";
}

GateOp op_from(const std::string& s) {
    if (s == "and") return GateOp::And;
    if (s == "xor") return GateOp::Xor;
    if (s == "not") return GateOp::Not;
    throw std::invalid_argument("unknown gate op " + s);
}

}  // namespace

std::string hybrid_to_json(const HybridCircuit& c) {
    nlohmann::json j;
    j["lq"] = c.lq;
    j["lc"] = c.lc;
    j["controls"] = nlohmann::json::array();
    j["slots"] = nlohmann::json::array();
    for (const auto& s : c.slots) {
        j["controls"].push_back(s.control);
        j["slots"].push_back({{"g0", gate_json(s.g0)}, {"g1", gate_json(s.g1)}, {"control", s.control}});
    }
    nlohmann::json f;
    f["inputs"] = c.post.n_inputs;
    f["gates"] = nlohmann::json::array();
    for (const auto& g : c.post.gates) f["gates"].push_back({{"op", op_name(g.op)}, {"a", g.a}, {"b", g.b}});
    f["outputs"] = c.post.outputs;
    j["f"] = f;
    return j.dump(2);
}

HybridCircuit hybrid_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    HybridCircuit c;
    c.lq = j.at("lq").get<int>();
    c.lc = j.at("lc").get<int>();
    for (const auto& s : j.at("slots")) {
        QubitSlot slot;
        slot.g0 = gate_from_json(s.at("g0"));
        slot.g1 = gate_from_json(s.at("g1"));
        slot.control = s.at("control").get<int>();
        c.slots.push_back(std::move(slot));
    }
    const auto& f = j.at("f");
    c.post.n_inputs = f.at("inputs").get<int>();
    for (const auto& g : f.at("gates"))
        c.post.gates.push_back({op_from(g.at("op").get<std::string>()), g.at("a").get<int>(), g.at("b").get<int>()});
    c.post.outputs = f.at("outputs").get<std::vector<int>>();
    c.validate();
    return c;
}

}  // namespace uenc

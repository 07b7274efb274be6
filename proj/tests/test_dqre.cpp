#include "uenc/dqre.hpp"

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "uenc/ucbit.hpp"

using namespace uenc;
using uenc::testing::random_pure;

namespace {

// lq=1, lc=1: optional controlled gate, f passes the outcome through.
HybridCircuit one_qubit_circuit(CliffordGate g0, CliffordGate g1) {
    HybridCircuit c;
    c.lq = 1;
    c.lc = 1;
    c.slots.push_back({std::move(g0), std::move(g1), 0});
    BoolBuilder b(2);
    b.mark_output(0);
    c.post = b.take();
    c.validate();
    return c;
}

// BB84 decode over n qubits: dk = theta || s; outputs parity(x) ^ parity(s).
HybridCircuit decode_circuit(int n) {
    HybridCircuit c;
    c.lq = n;
    c.lc = 2 * n;
    for (int i = 0; i < n; ++i) c.slots.push_back({CliffordGate::identity(), CliffordGate::h(), i});
    BoolBuilder b(n + 2 * n);
    std::vector<int> wires;
    for (int i = 0; i < n; ++i) wires.push_back(i);           // outcomes
    for (int i = 0; i < n; ++i) wires.push_back(n + n + i);   // s bits
    b.mark_output(b.parity(wires));
    c.post = b.take();
    c.validate();
    return c;
}

PureState label_all(const DqreRandomness& r, int lq, PureState st) {
    for (int i = 0; i < lq; ++i) st = dqre_label_q(r, i, st);
    return st;
}

std::vector<GcLabel> clabels_for(const DqreRandomness& r, const Bits& x) {
    std::vector<GcLabel> out;
    for (size_t i = 0; i < x.size(); ++i) out.push_back(dqre_label_c(r, static_cast<int>(i), x[i]));
    return out;
}

}  // namespace

TEST_CASE("transparent instantiation round-trips any circuit") {
    auto c = decode_circuit(2);
    DqreParams params;
    params.mode = DqreMode::Transparent;
    RngStream rng(3);
    auto enc = dqre_encode(c, params, rng);

    UcbitScheme sch(2);
    auto key = sch.gen(rng);
    auto samp = sch.enc(key, 1, rng);
    PureState in(RegisterLayout::qubits({"I0", "I1"}), samp.state.amplitudes());
    Bits x = key.concat();
    auto direct = hybrid_eval_exact(c, in, x);
    auto viadqre = dqre_eval_exact(enc.bundle, label_all(enc.r, 2, in), clabels_for(enc.r, x));
    CHECK(trace_distance(direct, DensityMatrix(direct.layout(), viadqre.matrix())) < kStateTol);
}

TEST_CASE("identity circuit reproduces input measurement statistics") {
    auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::identity());
    RngStream rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        RngStream sub = rng.fork(trial);
        auto psi = random_pure(RegisterLayout::qubits({"I0"}), sub);
        auto enc = dqre_encode(c, DqreParams{}, sub);
        Bits x({trial % 2});
        auto direct = hybrid_eval_exact(c, psi, x);
        auto via = dqre_eval_exact(enc.bundle, label_all(enc.r, 1, psi), clabels_for(enc.r, x));
        CHECK(trace_distance(direct, DensityMatrix(direct.layout(), via.matrix())) < kStateTol);
    }
}

TEST_CASE("controlled H on |-> decodes to 1 deterministically") {
    auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::h());
    RngStream rng(7);
    Vec minus(2);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    PureState in(RegisterLayout::qubits({"I0"}), minus);
    auto enc = dqre_encode(c, DqreParams{}, rng);
    auto out = dqre_eval_exact(enc.bundle, label_all(enc.r, 1, in), clabels_for(enc.r, Bits({1})));
    CHECK(std::abs(out.matrix()(1, 1).real() - 1.0) < kStateTol);

    // Sampled path agrees.
    for (int t = 0; t < 10; ++t) {
        RngStream sub = rng.fork(100 + t);
        auto enc2 = dqre_encode(c, DqreParams{}, sub);
        auto res = dqre_eval_sampled(enc2.bundle, label_all(enc2.r, 1, in), clabels_for(enc2.r, Bits({1})), sub);
        CHECK(res.output[0] == 1);
    }
}

TEST_CASE("single-qubit Clifford zoo round-trips") {
    RngStream rng(11);
    for (auto g : {CliffordGate::x(), CliffordGate::z(), CliffordGate::s(), CliffordGate::h()}) {
        auto c = one_qubit_circuit(CliffordGate::identity(), g);
        for (int bit : {0, 1}) {
            RngStream sub = rng.fork(bit * 17 + g.matrix()(1, 1).real() * 3 + 5);
            auto psi = random_pure(RegisterLayout::qubits({"I0"}), sub);
            auto enc = dqre_encode(c, DqreParams{}, sub);
            Bits x({bit});
            auto direct = hybrid_eval_exact(c, psi, x);
            auto via = dqre_eval_exact(enc.bundle, label_all(enc.r, 1, psi), clabels_for(enc.r, x));
            CHECK(trace_distance(direct, DensityMatrix(direct.layout(), via.matrix())) < kStateTol);
        }
    }
}

TEST_CASE("bb84 decode circuit on honest ciphertexts") {
    UcbitScheme sch(2);
    auto c = decode_circuit(2);
    RngStream rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        RngStream sub = rng.fork(trial);
        auto key = sch.gen(sub);
        int b = sub.bit();
        auto samp = sch.enc(key, b, sub);
        PureState in(RegisterLayout::qubits({"I0", "I1"}), samp.state.amplitudes());
        auto enc = dqre_encode(c, DqreParams{}, sub);
        auto out = dqre_eval_exact(enc.bundle, label_all(enc.r, 2, in), clabels_for(enc.r, key.concat()));
        CHECK(std::abs(out.matrix()(b, b).real() - 1.0) < kStateTol);
    }
}

TEST_CASE("correctness with side information: entangled inputs") {
    // Input qubit maximally entangled with E; joint (output, E) must match
    // the direct channel exactly.
    auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::h());
    RegisterLayout lay = RegisterLayout::qubits({"I0", "E"});
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    PureState in(lay, bell);
    RngStream rng(17);
    for (int bit : {0, 1}) {
        for (int trial = 0; trial < 4; ++trial) {
            RngStream sub = rng.fork(bit * 50 + trial);
            auto enc = dqre_encode(c, DqreParams{}, sub);
            Bits x({bit});
            auto direct = hybrid_eval_exact(c, in, x);
            auto via = dqre_eval_exact(enc.bundle, label_all(enc.r, 1, in), clabels_for(enc.r, x));
            CHECK(trace_distance(direct, DensityMatrix(direct.layout(), via.matrix())) < kStateTol);
        }
    }
}

TEST_CASE("unused branch halves average to the maximally mixed state") {
    // Exact Pauli-twirl identity: averaging the 2-qubit resource over its 16
    // key patterns gives I/4 regardless of the branch gate.
    RegisterLayout lay = RegisterLayout::qubits({"H1", "H2"});
    for (auto g : {CliffordGate::identity(), CliffordGate::h(), CliffordGate::s()}) {
        Mat avg = Mat::Zero(4, 4);
        auto ids = std::vector<int>{0, 1};
        for (int h1x : ids)
            for (int h1z : ids)
                for (int h2x : ids)
                    for (int h2z : ids) {
                        auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::identity());
                        (void)c;
                        // Rebuild through the encoder path: keys fixed by hand.
                        DqreRandomness r;
                        r.qubits.resize(1);
                        r.qubits[0].h1x = {h1x, h1x};
                        r.qubits[0].h1z = {h1z, h1z};
                        r.qubits[0].h2x = {h2x, h2x};
                        r.qubits[0].h2z = {h2z, h2z};
                        // Direct construction of the padded resource.
                        Vec epr = Vec::Zero(4);
                        epr(0) = epr(3) = 1.0 / std::sqrt(2.0);
                        PureState st(lay, epr);
                        st = apply(UnitaryOp(g.matrix()), st, {"H2"});
                        if (h1x) st = apply(UnitaryOp(pauli_x()), st, {"H1"});
                        if (h1z) st = apply(UnitaryOp(pauli_z()), st, {"H1"});
                        if (h2x) st = apply(UnitaryOp(pauli_x()), st, {"H2"});
                        if (h2z) st = apply(UnitaryOp(pauli_z()), st, {"H2"});
                        avg += st.amplitudes() * st.amplitudes().adjoint() / 16.0;
                    }
        CHECK((avg - Mat::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < kAlgebraTol);
    }
}

TEST_CASE("decomposability: classical labels ignore resource rebuilds") {
    auto c = decode_circuit(2);
    RngStream rng(19);
    auto enc = dqre_encode(c, DqreParams{}, rng);
    std::vector<std::string> before;
    for (int i = 0; i < c.lc; ++i)
        for (int bit : {0, 1}) before.push_back(dqre_label_c(enc.r, i, bit).serialize().to_hex());
    dqre_rebuild_resources(enc.bundle, enc.r);
    dqre_rebuild_resources(enc.bundle, enc.r);
    size_t idx = 0;
    for (int i = 0; i < c.lc; ++i)
        for (int bit : {0, 1}) CHECK(dqre_label_c(enc.r, i, bit).serialize().to_hex() == before[idx++]);
}

TEST_CASE("indistinguishability battery: same circuit, same inputs") {
    auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::h());
    RngStream rng(23);
    auto psi = random_pure(RegisterLayout::qubits({"I0"}), rng);
    IndistInput a{c, Bits({1}), psi};
    IndistInput b{c, Bits({1}), psi};
    auto rep = dqre_indist_check(a, b, DqreParams{}, 800, rng);
    CHECK(rep.precondition_ok);
    for (const auto& line : rep.battery) CHECK(line.advantage <= line.ci95 + 0.08);
}

TEST_CASE("indistinguishability battery: mismatched outputs are reported") {
    auto c = one_qubit_circuit(CliffordGate::identity(), CliffordGate::identity());
    RngStream rng(29);
    IndistInput a{c, Bits({0}), PureState::basis(RegisterLayout::qubits({"I0"}), 0)};
    IndistInput b{c, Bits({0}), PureState::basis(RegisterLayout::qubits({"I0"}), 1)};
    auto rep = dqre_indist_check(a, b, DqreParams{}, 10, rng);
    CHECK_FALSE(rep.precondition_ok);
    CHECK(rep.precondition_distance > 0.5);
}

TEST_CASE("hybrid circuit json round trip") {
    auto c = decode_circuit(2);
    auto text = hybrid_to_json(c);
    auto back = hybrid_from_json(text);
    CHECK(back.lq == c.lq);
    CHECK(back.lc == c.lc);
    CHECK(back.post.same_shape(c.post));
    CHECK(back.slots[1].g1.name() == "H");

    // Behavioral equality on a sample.
    RngStream rng(31);
    auto psi = random_pure(RegisterLayout::qubits({"I0", "I1"}), rng);
    Bits x = Bits::random(rng, 4);
    auto d1 = hybrid_eval_exact(c, psi, x);
    auto d2 = hybrid_eval_exact(back, psi, x);
    CHECK(trace_distance(d1, d2) < kAlgebraTol);
}

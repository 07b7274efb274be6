#include "uenc/qstate.hpp"

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace uenc;
using uenc::testing::random_density;
using uenc::testing::random_pure;

namespace {

PureState ket(const std::string& name, int b) {
    return PureState::basis(RegisterLayout::qubits({name}), b);
}

}  // anonymous namespace

TEST_CASE("layout invariants") {
    CHECK_THROWS_AS(RegisterLayout({{"A", 2}, {"A", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(RegisterLayout({{"A", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(RegisterLayout({{"A", 4096}, {"B", 2}}), DimCapError);
    RegisterLayout lay({{"A", 2}, {"B", 3}});
    CHECK(lay.dim() == 6);
    CHECK(lay.flat_of({1, 2}) == 5);
    CHECK(lay.digits_of(5) == std::vector<long>({1, 2}));
}

TEST_CASE("tensor identity and basis cases") {
    UnitaryOp i2 = UnitaryOp::identity(2);
    UnitaryOp i4 = tensor(i2, i2);
    CHECK((i4.matrix() - Mat::Identity(4, 4)).norm() == doctest::Approx(0.0));

    PureState p = tensor(ket("A", 0), ket("B", 1));
    CHECK(p.amplitudes()(1) == cx(1.0, 0.0));
    for (long i = 0; i < 4; ++i)
        if (i != 1) CHECK(std::abs(p.amplitudes()(i)) == 0.0);
}

TEST_CASE("tensor of density matrices matches index-formula oracle") {
    RngStream rng(11);
    auto a = random_density(RegisterLayout({{"A", 2}}), rng);
    auto b = random_density(RegisterLayout({{"B", 3}}), rng);
    auto t = tensor(a, b);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 3; ++j)
            for (long k = 0; k < 2; ++k)
                for (long l = 0; l < 3; ++l)
                    CHECK(std::abs(t.matrix()(i * 3 + j, k * 3 + l) - a.matrix()(i, k) * b.matrix()(j, l)) <
                          kAlgebraTol);
}

TEST_CASE("partial trace basics") {
    auto p01 = tensor(ket("A", 0), ket("B", 1));
    auto redA = partial_trace(p01, {"A"});
    CHECK(std::abs(redA.matrix()(0, 0) - 1.0) < kAlgebraTol);

    // Bell state traces to I/2.
    RegisterLayout lay = RegisterLayout::qubits({"A", "B"});
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    auto red = partial_trace(PureState(lay, bell), {"A"});
    CHECK((red.matrix() - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < kAlgebraTol);
}

TEST_CASE("partial trace of random bipartite pure state matches double-sum oracle") {
    RngStream rng(5);
    RegisterLayout lay({{"A", 3}, {"B", 4}});
    auto psi = random_pure(lay, rng);
    auto red = partial_trace(psi, {"A"});
    // Oracle: rho_A(i,k) = sum_j psi(i,j) conj(psi(k,j)).
    for (long i = 0; i < 3; ++i)
        for (long k = 0; k < 3; ++k) {
            cx sum = 0.0;
            for (long j = 0; j < 4; ++j) sum += psi.amplitudes()(i * 4 + j) * std::conj(psi.amplitudes()(k * 4 + j));
            CHECK(std::abs(red.matrix()(i, k) - sum) < 1e-12);
        }
}

TEST_CASE("tensor then trace recovers factor") {
    RngStream rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_density(RegisterLayout({{"A", 2}}), rng);
        auto b = random_density(RegisterLayout({{"B", 3}}), rng);
        auto back = partial_trace(tensor(a, b), {"A"});
        CHECK((back.matrix() - a.matrix()).cwiseAbs().maxCoeff() < kAlgebraTol);
    }
}

TEST_CASE("apply gates") {
    auto x0 = apply(UnitaryOp(pauli_x()), ket("A", 0), {"A"});
    CHECK(std::abs(x0.amplitudes()(1) - 1.0) < kAlgebraTol);

    auto h0 = apply(UnitaryOp(hadamard()), ket("A", 0), {"A"});
    CHECK(std::abs(h0.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < kAlgebraTol);
    CHECK(std::abs(h0.amplitudes()(1) - 1.0 / std::sqrt(2.0)) < kAlgebraTol);
}

TEST_CASE("apply on subsystem matches explicit tensor oracle") {
    RngStream rng(23);
    RegisterLayout lay({{"A", 2}, {"B", 3}});
    auto rho = random_density(lay, rng);
    auto u = haar_unitary(3, rng);
    auto applied = apply(u, rho, {"B"});
    Mat big = Mat::Zero(6, 6);
    for (long i = 0; i < 2; ++i) big.block(i * 3, i * 3, 3, 3) = u.matrix();
    Mat expect = big * rho.matrix() * big.adjoint();
    CHECK((applied.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);

    // Trace and Hermiticity preserved by construction of DensityMatrix.
    CHECK(std::abs(applied.matrix().trace().real() - 1.0) < kStateTol);
}

TEST_CASE("apply with reordered targets") {
    // U on (B,A) ordering vs (A,B) ordering are related by swap conjugation.
    RngStream rng(29);
    RegisterLayout lay = RegisterLayout::qubits({"A", "B"});
    auto psi = random_pure(lay, rng);
    auto u = haar_unitary(4, rng);
    auto a = apply(u, psi, {"A", "B"});
    auto b = apply(u, permute_registers(psi, {"B", "A"}), {"A", "B"});
    auto b_back = permute_registers(b, {"A", "B"});
    // Not equal in general; sanity: both normalized.
    CHECK(a.norm() == doctest::Approx(1.0));
    CHECK(b_back.norm() == doctest::Approx(1.0));

    // Applying on targets listed as {B,A} equals conjugating U by SWAP.
    auto viaBA = apply(u, psi, {"B", "A"});
    Mat swap = Mat::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    auto viaSwap = apply(UnitaryOp(swap * u.matrix() * swap), psi, {"A", "B"});
    CHECK((viaBA.amplitudes() - viaSwap.amplitudes()).norm() < 1e-12);
}

TEST_CASE("measurement basics") {
    RngStream rng(31);
    auto one = ket("A", 1);
    auto res = measure_computational(one, {"A"}, rng);
    CHECK(res.outcome[0] == 1);

    // |+> statistics: 10^4 trials, P(0) within 3 sigma of 1/2.
    auto plus = apply(UnitaryOp(hadamard()), ket("A", 0), {"A"});
    int zeros = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        RngStream sub = rng.fork(i);
        if (measure_computational(plus, {"A"}, sub).outcome[0] == 0) ++zeros;
    }
    double p = static_cast<double>(zeros) / n;
    double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(p - 0.5) < 3 * sigma);

    // Post-state of Bell measurement matches outcome.
    RegisterLayout lay = RegisterLayout::qubits({"A", "B"});
    Vec bell = Vec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 20; ++i) {
        RngStream sub = rng.fork(1000 + i);
        auto r = measure_computational(PureState(lay, bell), {"A"}, sub);
        int b = r.outcome[0];
        CHECK(std::abs(r.post.amplitudes()(b * 2 + b) - 1.0) < kAlgebraTol);
    }
}

TEST_CASE("haar unitary properties") {
    RngStream rng(37);
    auto u1 = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u1.matrix()(0, 0)) - 1.0) < kStateTol);

    for (int s = 0; s < 100; ++s) {
        RngStream sub = rng.fork(s);
        auto u = haar_unitary(4, sub);
        CHECK((u.matrix() * u.matrix().adjoint() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < kStateTol);
    }

    // First-moment identity E|U_00|^2 = 1/2 at dim 2.
    const int n = 10000;
    double sum = 0.0;
    for (int s = 0; s < n; ++s) {
        RngStream sub = rng.fork(10000 + s);
        sum += std::norm(haar_unitary(2, sub).matrix()(0, 0));
    }
    double mean = sum / n;
    // Var(|U00|^2) = 1/12 for d=2 (Beta(1,1) distribution).
    double sigma = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(mean - 0.5) < 3 * sigma);
}

TEST_CASE("canonical purification") {
    // sigma = |0><0| purifies to |00>.
    auto zero = ket("A", 0).to_density();
    auto pure = canonical_purification(zero);
    CHECK(std::abs(pure.amplitudes()(0) - 1.0) < kStateTol);

    // sigma = I/2 purifies to a Bell state.
    auto mixed = DensityMatrix::maximally_mixed(RegisterLayout::qubits({"A"}));
    auto bell = canonical_purification(mixed);
    CHECK(std::abs(bell.amplitudes()(0) - 1.0 / std::sqrt(2.0)) < kStateTol);
    CHECK(std::abs(bell.amplitudes()(3) - 1.0 / std::sqrt(2.0)) < kStateTol);

    // Round trip on a random qutrit state.
    RngStream rng(41);
    auto sigma = random_density(RegisterLayout({{"A", 3}}), rng);
    auto puri = canonical_purification(sigma);
    auto back = partial_trace(puri, {"A"});
    CHECK((back.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() < kStateTol);

    CHECK_THROWS(canonical_purification(
        DensityMatrix(RegisterLayout({{"A", 2}}), (Mat(2, 2) << 1.5, 0, 0, -0.5).finished(), 1.0)));
}

TEST_CASE("trace distance and fidelity") {
    auto z = ket("A", 0).to_density();
    auto o = ket("A", 1).to_density();
    CHECK(trace_distance(z, z) == doctest::Approx(0.0));
    CHECK(trace_distance(z, o) == doctest::Approx(1.0));
    CHECK(fidelity(z, z) == doctest::Approx(1.0));
    CHECK(fidelity(z, o) == doctest::Approx(0.0));

    // Two routes for |0><0| vs |+><+|: eigenvalue sum vs closed form.
    auto plus = apply(UnitaryOp(hadamard()), ket("A", 0), {"A"}).to_density();
    double via_eigen = trace_distance(z, plus);
    double closed = std::sqrt(1.0 - 0.5);  // sqrt(1 - |<0|+>|^2)
    CHECK(std::abs(via_eigen - closed) < 1e-12);

    CHECK_THROWS(trace_distance(z, ket("B", 0).to_density()));
}

TEST_CASE("permute and remove registers") {
    RngStream rng(43);
    RegisterLayout lay = RegisterLayout::qubits({"A", "B", "C"});
    auto psi = random_pure(lay, rng);
    auto perm = permute_registers(psi, {"C", "A", "B"});
    auto back = permute_registers(perm, {"A", "B", "C"});
    CHECK((psi.amplitudes() - back.amplitudes()).norm() < 1e-14);

    // Remove a collapsed register.
    auto with_basis = tensor(psi, ket("D", 1));
    auto removed = remove_basis_registers(with_basis, {"D"});
    CHECK((removed.amplitudes() - psi.amplitudes()).norm() < 1e-12);
    CHECK_THROWS(remove_basis_registers(with_basis, {"A"}));
}

TEST_CASE("debug json dump shape") {
    Mat id = Mat::Identity(2, 2);
    auto s = debug_json(id);
    CHECK(s == "[[[1,0],[0,0]],[[0,0],[1,0]]]");
}

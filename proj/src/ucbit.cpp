#include "uenc/ucbit.hpp"

namespace uenc {

UcbitScheme::UcbitScheme(int n, bool classical) : n_(n), classical_(classical) {
    if (n < 1 || n > 6) throw std::invalid_argument("UcbitScheme: n must be in [1,6]");
}

std::vector<std::string> UcbitScheme::ct_registers() const {
    std::vector<std::string> names;
    names.reserve(n_);
    for (int i = 0; i < n_; ++i) names.push_back("C" + std::to_string(i));
    return names;
}

UcbitKey UcbitScheme::gen(RngStream& rng) const {
    Bits theta = classical_ ? Bits(n_) : Bits::random(rng, n_);
    Bits s = Bits::random(rng, n_);
    return {std::move(theta), std::move(s)};
}

Bits UcbitScheme::x_from_randomness(const UcbitKey& key, int b, const Bits& r) const {
    if (static_cast<int>(r.size()) != n_ - 1) throw std::invalid_argument("ucbit: randomness length mismatch");
    Bits x = r;
    x.push_back((b ^ key.s.parity() ^ r.parity()) & 1);
    return x;
}

PureState UcbitScheme::state_for_x(const UcbitKey& key, const Bits& x) const {
    PureState st = PureState::from_bits(RegisterLayout::qubits(ct_registers()), x);
    UnitaryOp h(hadamard());
    for (int i = 0; i < n_; ++i)
        if (key.theta[i]) st = apply(h, st, {"C" + std::to_string(i)});
    return st;
}

UcbitScheme::EncSample UcbitScheme::enc(const UcbitKey& key, int b, RngStream& rng) const {
    Bits r = Bits::random(rng, n_ - 1);
    Bits x = x_from_randomness(key, b, r);
    return {state_for_x(key, x), std::move(x)};
}

DensityMatrix UcbitScheme::enc_channel(const UcbitKey& key, int b) const {
    long dim = 1L << n_;
    Mat rho = Mat::Zero(dim, dim);
    double weight = 1.0 / static_cast<double>(1L << (n_ - 1));
    int want = (b ^ key.s.parity()) & 1;
    for (long xi = 0; xi < dim; ++xi) {
        Bits x(n_);
        for (int i = 0; i < n_; ++i) x.set(i, static_cast<int>((xi >> (n_ - 1 - i)) & 1));
        if (x.parity() != want) continue;
        auto st = state_for_x(key, x);
        rho += weight * (st.amplitudes() * st.amplitudes().adjoint());
    }
    return DensityMatrix(RegisterLayout::qubits(ct_registers()), std::move(rho));
}

int UcbitScheme::dec(const UcbitKey& key, const PureState& ct, RngStream& rng) const {
    PureState st = ct;
    UnitaryOp h(hadamard());
    for (int i = 0; i < n_; ++i)
        if (key.theta[i]) st = apply(h, st, {"C" + std::to_string(i)});
    auto res = measure_computational(st, ct_registers(), rng);
    return res.outcome.parity() ^ key.s.parity();
}

double UcbitScheme::dec_success_probability(const UcbitKey& key, const DensityMatrix& ct, int b) const {
    DensityMatrix st = ct;
    UnitaryOp h(hadamard());
    for (int i = 0; i < n_; ++i)
        if (key.theta[i]) st = apply(h, st, {"C" + std::to_string(i)});
    // Success = measured parity equals b xor parity(s).
    int want = (b ^ key.s.parity()) & 1;
    double p = 0.0;
    for (long xi = 0; xi < st.dim(); ++xi) {
        int parity = 0;
        for (int i = 0; i < n_; ++i) parity ^= static_cast<int>((xi >> i) & 1);
        if (parity == want) p += st.matrix()(xi, xi).real();
    }
    return p;
}

}  // namespace uenc

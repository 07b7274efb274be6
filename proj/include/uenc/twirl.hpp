#pragma once

#include <functional>
#include <map>
#include <vector>

#include "uenc/qstate.hpp"

namespace uenc {

// Permutations of [t] as index vectors: perm[i] = image of i.
using Perm = std::vector<int>;

std::vector<Perm> symmetric_group(int t);
Perm perm_compose(const Perm& a, const Perm& b);  // (a o b)(i) = a[b[i]]
Perm perm_inverse(const Perm& p);
int perm_cycle_count(const Perm& p);

struct TwirlConfig {
    int t = 1;       // copy count, <= 4
    long N = 2;      // dim(A)
    long M = 2;      // dim(B); the twirled factor
    double epsilon = 1e-2;  // target error for sampled implementations

    void validate(long dim_cap = kDefaultDimCap) const;
};

// Permutation operator P_pi on (C^d)^{(x)t}: P_pi |b_1..b_t> =
// |b_{pi^-1(1)} .. b_{pi^-1(t)}>.
class PermOperator {
  public:
    PermOperator(Perm pi, long d);
    const Perm& perm() const { return pi_; }
    long local_dim() const { return d_; }
    long dim() const;
    // Image of a composite index under P_pi (so P_pi |b> = |image(b)>).
    long image(long flat) const;
    Mat matrix() const;

  private:
    Perm pi_;
    long d_;
};

// Gram matrix of permutation operators: G[pi,tau] = d^{#cycles(pi tau^-1)},
// indexed by the order symmetric_group(t) returns.
Eigen::MatrixXd gram_matrix(int t, long d);

// Weingarten coefficients Wg(pi, d): the identity-permutation row of the
// inverse Gram matrix. Depends only on cycle type.
struct WeingartenTable {
    int t;
    long d;
    std::vector<Perm> perms;
    std::vector<double> wg;  // aligned with perms

    double coeff(const Perm& p) const;
};

// Throws std::invalid_argument when the Gram matrix is singular (d < t).
WeingartenTable weingarten(int t, long d);

// Exact Haar average E_U[(I_N (x) U_M)^{(x)t} X (I (x) U^dag)^{(x)t}] for X on
// the interleaved layout (A@1, B@1, ..., A@t, B@t). Internally uses the
// pseudo-inverse of the Gram matrix, so it stays valid when d < t and the
// permutation operators are linearly dependent.
DensityMatrix exact_twirl_B(const DensityMatrix& x, const TwirlConfig& cfg);

// Monte-Carlo estimate of the same channel. The sampler is replaceable for
// tests; the default draws Haar unitaries from the stream.
DensityMatrix mc_twirl_B(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng);
DensityMatrix mc_twirl_B(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng,
                         const std::function<UnitaryOp(long, RngStream&)>& sampler);

// Per-entry mean and standard error, for 3-sigma comparisons against the
// closed form.
struct McTwirlStats {
    DensityMatrix mean;
    Eigen::MatrixXd stderr_re;
    Eigen::MatrixXd stderr_im;
};
McTwirlStats mc_twirl_B_stats(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng);

// Purification channel: sigma on A (dim N) -> twirled t copies of the
// canonical purification, on the interleaved (A@c, B@c) layout. By the
// twirl identity the output is the same for every purification with
// dim(B) = M, which is the content of the theorem this realizes.
DensityMatrix sim_t(const DensityMatrix& sigma, const TwirlConfig& cfg);

}  // namespace uenc

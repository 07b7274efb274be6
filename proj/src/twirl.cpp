#include "uenc/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uenc {

std::vector<Perm> symmetric_group(int t) {
    Perm p(t);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Perm perm_compose(const Perm& a, const Perm& b) {
    Perm out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
    return out;
}

Perm perm_inverse(const Perm& p) {
    Perm out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

int perm_cycle_count(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    int cycles = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(p[j]);
        }
    }
    return cycles;
}

void TwirlConfig::validate(long dim_cap) const {
    if (t < 1 || t > 4) throw std::invalid_argument("TwirlConfig: t must be in [1,4]");
    if (N < 2 || M < 2) throw std::invalid_argument("TwirlConfig: N, M must be >= 2");
    if (epsilon <= 0) throw std::invalid_argument("TwirlConfig: epsilon must be positive");
    long dim = 1;
    for (int c = 0; c < t; ++c) {
        if (dim > dim_cap / (N * M)) throw DimCapError("TwirlConfig: (N*M)^t exceeds dimension cap");
        dim *= N * M;
    }
}

PermOperator::PermOperator(Perm pi, long d) : pi_(std::move(pi)), d_(d) {
    if (d_ < 1) throw std::invalid_argument("PermOperator: d >= 1 required");
}

long PermOperator::dim() const {
    long out = 1;
    for (size_t i = 0; i < pi_.size(); ++i) out *= d_;
    return out;
}

long PermOperator::image(long flat) const {
    int t = static_cast<int>(pi_.size());
    std::vector<long> digits(t);
    for (int i = t; i-- > 0;) {
        digits[i] = flat % d_;
        flat /= d_;
    }
    Perm inv = perm_inverse(pi_);
    long out = 0;
    for (int i = 0; i < t; ++i) out = out * d_ + digits[inv[i]];
    return out;
}

Mat PermOperator::matrix() const {
    long n = dim();
    Mat m = Mat::Zero(n, n);
    for (long b = 0; b < n; ++b) m(image(b), b) = 1.0;
    return m;
}

Eigen::MatrixXd gram_matrix(int t, long d) {
    if (t < 1 || t > 4) throw std::invalid_argument("gram_matrix: t must be in [1,4]");
    if (d < 2) throw std::invalid_argument("gram_matrix: d >= 2 required");
    auto perms = symmetric_group(t);
    size_t n = perms.size();
    Eigen::MatrixXd g(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            g(i, j) = std::pow(static_cast<double>(d), perm_cycle_count(perm_compose(perms[i], perm_inverse(perms[j]))));
    return g;
}

double WeingartenTable::coeff(const Perm& p) const {
    for (size_t i = 0; i < perms.size(); ++i)
        if (perms[i] == p) return wg[i];
    throw std::invalid_argument("WeingartenTable: unknown permutation");
}

WeingartenTable weingarten(int t, long d) {
    Eigen::MatrixXd g = gram_matrix(t, d);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible())
        throw std::invalid_argument("weingarten: Gram matrix singular (d < t); out of supported range");
    Eigen::MatrixXd inv = lu.inverse();
    WeingartenTable tbl;
    tbl.t = t;
    tbl.d = d;
    tbl.perms = symmetric_group(t);
    // Identity permutation is index 0 in lexicographic order.
    tbl.wg.resize(tbl.perms.size());
    for (size_t i = 0; i < tbl.perms.size(); ++i) tbl.wg[i] = inv(0, i);
    return tbl;
}

namespace {

Eigen::MatrixXd pinv_sym(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    Eigen::VectorXd ev = es.eigenvalues();
    double cutoff = ev.cwiseAbs().maxCoeff() * 1e-12;
    Eigen::VectorXd inv = ev;
    for (long i = 0; i < ev.size(); ++i) inv(i) = (std::abs(ev(i)) > cutoff) ? 1.0 / ev(i) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<std::string> interleaved_names(int t) {
    std::vector<std::string> names;
    for (int c = 1; c <= t; ++c) {
        names.push_back("A@" + std::to_string(c));
        names.push_back("B@" + std::to_string(c));
    }
    return names;
}

std::vector<std::string> grouped_names(int t) {
    std::vector<std::string> names;
    for (int c = 1; c <= t; ++c) names.push_back("A@" + std::to_string(c));
    for (int c = 1; c <= t; ++c) names.push_back("B@" + std::to_string(c));
    return names;
}

void check_twirl_layout(const DensityMatrix& x, const TwirlConfig& cfg) {
    const auto& lay = x.layout();
    if (lay.num_registers() != static_cast<size_t>(2 * cfg.t))
        throw std::invalid_argument("twirl: layout must have 2t registers (A@c, B@c interleaved)");
    for (int c = 0; c < cfg.t; ++c) {
        if (lay.local_dim(2 * c) != cfg.N || lay.local_dim(2 * c + 1) != cfg.M)
            throw std::invalid_argument("twirl: register dims must alternate (N, M)");
    }
}

// Relabel registers to the canonical A@c/B@c interleaved names.
DensityMatrix canonical_labels(const DensityMatrix& x, const TwirlConfig& cfg) {
    std::vector<std::pair<std::string, long>> regs;
    for (int c = 1; c <= cfg.t; ++c) {
        regs.emplace_back("A@" + std::to_string(c), cfg.N);
        regs.emplace_back("B@" + std::to_string(c), cfg.M);
    }
    return DensityMatrix(RegisterLayout(std::move(regs), x.layout().dim_cap()), x.matrix());
}

}  // namespace

DensityMatrix exact_twirl_B(const DensityMatrix& x_in, const TwirlConfig& cfg) {
    cfg.validate(x_in.layout().dim_cap());
    check_twirl_layout(x_in, cfg);
    DensityMatrix x = canonical_labels(x_in, cfg);
    DensityMatrix grouped = permute_registers(x, grouped_names(cfg.t));

    auto perms = symmetric_group(cfg.t);
    size_t np = perms.size();
    long da = 1, db = 1;
    for (int c = 0; c < cfg.t; ++c) {
        da *= cfg.N;
        db *= cfg.M;
    }

    std::vector<PermOperator> ops;
    ops.reserve(np);
    for (const auto& p : perms) ops.emplace_back(p, cfg.M);

    // Z_rho = Tr_{B^t}[(I (x) P_rho^dag) X]; entries Z[a,a'] =
    // sum_b X[(a, image_rho(b)), (a', b)].
    std::vector<Mat> z(np, Mat::Zero(da, da));
    const Mat& xm = grouped.matrix();
    for (size_t r = 0; r < np; ++r) {
        for (long b = 0; b < db; ++b) {
            long ib = ops[r].image(b);
            for (long a = 0; a < da; ++a)
                for (long a2 = 0; a2 < da; ++a2) z[r](a, a2) += xm(a * db + ib, a2 * db + b);
        }
    }

    // Solve G Y = Z via the pseudo-inverse (G singular when M < t, but the
    // reconstructed operator is unique).
    Eigen::MatrixXd ginv = pinv_sym(gram_matrix(cfg.t, cfg.M));
    std::vector<Mat> y(np, Mat::Zero(da, da));
    for (size_t p = 0; p < np; ++p)
        for (size_t r = 0; r < np; ++r)
            if (ginv(p, r) != 0.0) y[p] += ginv(p, r) * z[r];

    // Out = sum_pi Y_pi (x) P_pi.
    Mat out = Mat::Zero(da * db, da * db);
    for (size_t p = 0; p < np; ++p) {
        for (long b = 0; b < db; ++b) {
            long ib = ops[p].image(b);
            for (long a = 0; a < da; ++a)
                for (long a2 = 0; a2 < da; ++a2) out(a * db + ib, a2 * db + b) += y[p](a, a2);
        }
    }

    DensityMatrix res(grouped.layout(), std::move(out));
    DensityMatrix inter = permute_registers(res, interleaved_names(cfg.t));
    // Restore the caller's register names.
    return DensityMatrix(x_in.layout(), inter.matrix());
}

namespace {

Mat interleaved_conjugator(const Mat& u, const TwirlConfig& cfg) {
    Mat in = Mat::Identity(cfg.N, cfg.N);
    Mat per_copy(cfg.N * u.rows(), cfg.N * u.cols());
    for (long i = 0; i < cfg.N; ++i)
        for (long j = 0; j < cfg.N; ++j)
            per_copy.block(i * u.rows(), j * u.cols(), u.rows(), u.cols()) = in(i, j) * u;
    Mat total = per_copy;
    for (int c = 1; c < cfg.t; ++c) {
        Mat next(total.rows() * per_copy.rows(), total.cols() * per_copy.cols());
        for (long i = 0; i < total.rows(); ++i)
            for (long j = 0; j < total.cols(); ++j)
                next.block(i * per_copy.rows(), j * per_copy.cols(), per_copy.rows(), per_copy.cols()) =
                    total(i, j) * per_copy;
        total = std::move(next);
    }
    return total;
}

}  // namespace

DensityMatrix mc_twirl_B(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng,
                         const std::function<UnitaryOp(long, RngStream&)>& sampler) {
    cfg.validate(x.layout().dim_cap());
    check_twirl_layout(x, cfg);
    if (samples < 1) throw std::invalid_argument("mc_twirl_B: samples >= 1 required");
    Mat acc = Mat::Zero(x.dim(), x.dim());
    for (int s = 0; s < samples; ++s) {
        RngStream sub = rng.fork(static_cast<uint64_t>(s));
        Mat v = interleaved_conjugator(sampler(cfg.M, sub).matrix(), cfg);
        acc += v * x.matrix() * v.adjoint();
    }
    acc /= static_cast<double>(samples);
    return DensityMatrix(x.layout(), std::move(acc));
}

DensityMatrix mc_twirl_B(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng) {
    return mc_twirl_B(x, cfg, samples, rng, [](long d, RngStream& r) { return haar_unitary(d, r); });
}

McTwirlStats mc_twirl_B_stats(const DensityMatrix& x, const TwirlConfig& cfg, int samples, RngStream& rng) {
    cfg.validate(x.layout().dim_cap());
    check_twirl_layout(x, cfg);
    long n = x.dim();
    Mat sum = Mat::Zero(n, n);
    Eigen::MatrixXd sumsq_re = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sumsq_im = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < samples; ++s) {
        RngStream sub = rng.fork(static_cast<uint64_t>(s));
        Mat v = interleaved_conjugator(haar_unitary(cfg.M, sub).matrix(), cfg);
        Mat term = v * x.matrix() * v.adjoint();
        sum += term;
        sumsq_re += term.real().cwiseProduct(term.real());
        sumsq_im += term.imag().cwiseProduct(term.imag());
    }
    double ns = static_cast<double>(samples);
    Mat mean = sum / ns;
    Eigen::MatrixXd var_re = (sumsq_re / ns - mean.real().cwiseProduct(mean.real())).cwiseMax(0.0);
    Eigen::MatrixXd var_im = (sumsq_im / ns - mean.imag().cwiseProduct(mean.imag())).cwiseMax(0.0);
    return {DensityMatrix(x.layout(), mean), (var_re / ns).cwiseSqrt(), (var_im / ns).cwiseSqrt()};
}

DensityMatrix sim_t(const DensityMatrix& sigma, const TwirlConfig& cfg) {
    if (sigma.dim() != cfg.N) throw std::invalid_argument("sim_t: dim(sigma) must equal N");
    if (cfg.M != cfg.N)
        throw std::invalid_argument("sim_t: only M = N supported (canonical purification register)");
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma.matrix(), Eigen::EigenvaluesOnly);
    long rank = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > kStateTol) ++rank;
    if (cfg.M < rank) throw std::invalid_argument("sim_t: M smaller than rank of sigma");
    cfg.validate(sigma.layout().dim_cap());

    // Flatten to a single A register, purify, take t copies, twirl B.
    DensityMatrix flat(RegisterLayout({{"A", cfg.N}}, sigma.layout().dim_cap()), sigma.matrix());
    PureState phi = canonical_purification(flat, "B");
    PureState copies = tensor_power(phi, cfg.t);
    return exact_twirl_B(copies.to_density(), cfg);
}

}  // namespace uenc

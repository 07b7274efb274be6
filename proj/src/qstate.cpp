#include "uenc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace uenc {

// ---- RegisterLayout ----

RegisterLayout::RegisterLayout(std::vector<std::pair<std::string, long>> regs, long dim_cap)
    : regs_(std::move(regs)), cap_(dim_cap) {
    std::set<std::string> seen;
    for (const auto& [name, d] : regs_) {
        if (d < 2) throw std::invalid_argument("RegisterLayout: local dimension must be >= 2 (" + name + ")");
        if (!seen.insert(name).second) throw std::invalid_argument("RegisterLayout: duplicate register name " + name);
        if (dim_ > cap_ / d) throw DimCapError("RegisterLayout: total dimension exceeds cap");
        dim_ *= d;
    }
}

RegisterLayout RegisterLayout::qubits(const std::vector<std::string>& names, long dim_cap) {
    std::vector<std::pair<std::string, long>> regs;
    regs.reserve(names.size());
    for (const auto& n : names) regs.emplace_back(n, 2);
    return RegisterLayout(std::move(regs), dim_cap);
}

RegisterLayout RegisterLayout::qubit_range(const std::string& prefix, int n, long dim_cap) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    return qubits(names, dim_cap);
}

bool RegisterLayout::has(const std::string& name) const {
    for (const auto& [n, d] : regs_)
        if (n == name) return true;
    return false;
}

size_t RegisterLayout::index_of(const std::string& name) const {
    for (size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].first == name) return i;
    throw std::invalid_argument("RegisterLayout: unknown register " + name);
}

long RegisterLayout::stride(size_t i) const {
    long s = 1;
    for (size_t j = i + 1; j < regs_.size(); ++j) s *= regs_[j].second;
    return s;
}

std::vector<long> RegisterLayout::digits_of(long flat) const {
    std::vector<long> out(regs_.size());
    for (size_t i = regs_.size(); i-- > 0;) {
        out[i] = flat % regs_[i].second;
        flat /= regs_[i].second;
    }
    return out;
}

long RegisterLayout::flat_of(const std::vector<long>& digits) const {
    long flat = 0;
    for (size_t i = 0; i < regs_.size(); ++i) flat = flat * regs_[i].second + digits[i];
    return flat;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
    auto regs = regs_;
    regs.insert(regs.end(), other.regs_.begin(), other.regs_.end());
    return RegisterLayout(std::move(regs), std::max(cap_, other.cap_));
}

RegisterLayout RegisterLayout::renamed(const std::string& suffix) const {
    auto regs = regs_;
    for (auto& [n, d] : regs) n += suffix;
    return RegisterLayout(std::move(regs), cap_);
}

RegisterLayout RegisterLayout::subset(const std::vector<std::string>& names) const {
    std::vector<std::pair<std::string, long>> regs;
    regs.reserve(names.size());
    for (const auto& n : names) regs.emplace_back(n, regs_[index_of(n)].second);
    return RegisterLayout(std::move(regs), cap_);
}

bool RegisterLayout::same_as(const RegisterLayout& other) const { return regs_ == other.regs_; }

// ---- Constructors / invariants ----

UnitaryOp::UnitaryOp(Mat m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("UnitaryOp: matrix not square");
    Mat delta = m_ * m_.adjoint() - Mat::Identity(m_.rows(), m_.cols());
    if (delta.operatorNorm() > tol) throw std::invalid_argument("UnitaryOp: not unitary within tolerance");
}

UnitaryOp UnitaryOp::identity(long dim) { return UnitaryOp(Mat::Identity(dim, dim)); }

PureState::PureState(RegisterLayout layout, Vec amps, double tol) : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (amps_.size() != layout_.dim()) throw std::invalid_argument("PureState: amplitude count != layout dimension");
    if (std::abs(amps_.squaredNorm() - 1.0) > tol) throw std::invalid_argument("PureState: not normalized");
}

PureState PureState::basis(RegisterLayout layout, long index) {
    Vec v = Vec::Zero(layout.dim());
    v(index) = 1.0;
    return PureState(std::move(layout), std::move(v));
}

PureState PureState::basis(RegisterLayout layout, const std::vector<long>& digits) {
    long flat = layout.flat_of(digits);
    return basis(std::move(layout), flat);
}

PureState PureState::from_bits(RegisterLayout layout, const Bits& bits) {
    if (bits.size() != layout.num_registers()) throw std::invalid_argument("PureState::from_bits: size mismatch");
    std::vector<long> digits(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
        if (layout.local_dim(i) != 2) throw std::invalid_argument("PureState::from_bits: non-qubit register");
        digits[i] = bits[i];
    }
    return basis(std::move(layout), digits);
}

DensityMatrix PureState::to_density() const { return DensityMatrix(layout_, amps_ * amps_.adjoint()); }

DensityMatrix::DensityMatrix(RegisterLayout layout, Mat rho, double tol)
    : layout_(std::move(layout)), rho_(std::move(rho)) {
    if (rho_.rows() != layout_.dim() || rho_.cols() != layout_.dim())
        throw std::invalid_argument("DensityMatrix: dimension != layout dimension");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
    if (std::abs(rho_.trace().real() - 1.0) > tol || std::abs(rho_.trace().imag()) > tol)
        throw std::invalid_argument("DensityMatrix: trace != 1 within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::maximally_mixed(RegisterLayout layout) {
    long d = layout.dim();
    return DensityMatrix(std::move(layout), Mat::Identity(d, d) / static_cast<double>(d));
}

// ---- Tensor products ----

namespace {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
    return PureState(a.layout().concat(b.layout()), kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) { return UnitaryOp(kron(a.matrix(), b.matrix())); }

PureState tensor_power(const PureState& s, int t) {
    if (t < 1) throw std::invalid_argument("tensor_power: t >= 1 required");
    PureState out = s.renamed("@1");
    for (int c = 2; c <= t; ++c) out = tensor(out, s.renamed("@" + std::to_string(c)));
    return out;
}

DensityMatrix tensor_power(const DensityMatrix& s, int t) {
    if (t < 1) throw std::invalid_argument("tensor_power: t >= 1 required");
    DensityMatrix out = s.renamed("@1");
    for (int c = 2; c <= t; ++c) out = tensor(out, s.renamed("@" + std::to_string(c)));
    return out;
}

// ---- Partial trace ----

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
    const auto& lay = rho.layout();
    std::vector<size_t> keep_idx;
    keep_idx.reserve(keep.size());
    for (const auto& n : keep) keep_idx.push_back(lay.index_of(n));
    std::vector<bool> kept(lay.num_registers(), false);
    for (size_t i : keep_idx) kept[i] = true;

    RegisterLayout out_lay = lay.subset(keep);
    long kd = out_lay.dim();
    long td = lay.dim() / kd;

    // Enumerate (kept digits, traced digits) pairs explicitly.
    std::vector<size_t> traced_idx;
    for (size_t i = 0; i < lay.num_registers(); ++i)
        if (!kept[i]) traced_idx.push_back(i);

    auto flat_from = [&](long kflat, long tflat) {
        std::vector<long> digits(lay.num_registers());
        std::vector<long> kd_digits = out_lay.digits_of(kflat);
        for (size_t i = 0; i < keep_idx.size(); ++i) digits[keep_idx[i]] = kd_digits[i];
        for (size_t i = traced_idx.size(); i-- > 0;) {
            digits[traced_idx[i]] = tflat % lay.local_dim(traced_idx[i]);
            tflat /= lay.local_dim(traced_idx[i]);
        }
        return lay.flat_of(digits);
    };

    Mat out = Mat::Zero(kd, kd);
    for (long r = 0; r < kd; ++r)
        for (long c = 0; c < kd; ++c) {
            cx sum = 0.0;
            for (long t = 0; t < td; ++t) sum += rho.matrix()(flat_from(r, t), flat_from(c, t));
            out(r, c) = sum;
        }
    return DensityMatrix(std::move(out_lay), std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<std::string>& keep) {
    return partial_trace(psi.to_density(), keep);
}

// ---- Register permutation ----

namespace {

std::vector<long> permutation_map(const RegisterLayout& from, const RegisterLayout& to) {
    // map[new_flat] = old_flat
    std::vector<size_t> src_idx(to.num_registers());
    for (size_t i = 0; i < to.num_registers(); ++i) src_idx[i] = from.index_of(to.name(i));
    std::vector<long> map(from.dim());
    for (long old_flat = 0; old_flat < from.dim(); ++old_flat) {
        auto digits = from.digits_of(old_flat);
        std::vector<long> nd(to.num_registers());
        for (size_t i = 0; i < to.num_registers(); ++i) nd[i] = digits[src_idx[i]];
        map[to.flat_of(nd)] = old_flat;
    }
    return map;
}

}  // namespace

PureState permute_registers(const PureState& s, const std::vector<std::string>& order) {
    if (order.size() != s.layout().num_registers())
        throw std::invalid_argument("permute_registers: order must list every register");
    RegisterLayout out_lay = s.layout().subset(order);
    auto map = permutation_map(s.layout(), out_lay);
    Vec v(s.dim());
    for (long i = 0; i < s.dim(); ++i) v(i) = s.amplitudes()(map[i]);
    return PureState(std::move(out_lay), std::move(v));
}

DensityMatrix permute_registers(const DensityMatrix& s, const std::vector<std::string>& order) {
    if (order.size() != s.layout().num_registers())
        throw std::invalid_argument("permute_registers: order must list every register");
    RegisterLayout out_lay = s.layout().subset(order);
    auto map = permutation_map(s.layout(), out_lay);
    Mat m(s.dim(), s.dim());
    for (long i = 0; i < s.dim(); ++i)
        for (long j = 0; j < s.dim(); ++j) m(i, j) = s.matrix()(map[i], map[j]);
    return DensityMatrix(std::move(out_lay), std::move(m));
}

// ---- Apply ----

namespace {

// Iterate basis indices with targets factored out: flat = base + sum_k
// digit_k * tstride_k over target digits.
struct TargetView {
    std::vector<long> tstrides;
    std::vector<long> tdims;
    long tdim = 1;
    std::vector<long> bases;  // flat index of every assignment of non-target digits

    TargetView(const RegisterLayout& lay, const std::vector<std::string>& targets) {
        std::vector<bool> is_target(lay.num_registers(), false);
        for (const auto& n : targets) {
            size_t idx = lay.index_of(n);
            if (is_target[idx]) throw std::invalid_argument("duplicate target register " + n);
            is_target[idx] = true;
        }
        for (const auto& n : targets) {
            size_t idx = lay.index_of(n);
            tstrides.push_back(lay.stride(idx));
            tdims.push_back(lay.local_dim(idx));
            tdim *= lay.local_dim(idx);
        }
        // Enumerate the complement.
        std::vector<size_t> rest;
        for (size_t i = 0; i < lay.num_registers(); ++i)
            if (!is_target[i]) rest.push_back(i);
        long rdim = 1;
        for (size_t i : rest) rdim *= lay.local_dim(i);
        bases.resize(rdim);
        for (long r = 0; r < rdim; ++r) {
            long rem = r, base = 0;
            for (size_t i = rest.size(); i-- > 0;) {
                long d = lay.local_dim(rest[i]);
                base += (rem % d) * lay.stride(rest[i]);
                rem /= d;
            }
            bases[r] = base;
        }
    }

    long target_offset(long tflat) const {
        long off = 0;
        for (size_t k = tstrides.size(); k-- > 0;) {
            off += (tflat % tdims[k]) * tstrides[k];
            tflat /= tdims[k];
        }
        return off;
    }
};

}  // namespace

PureState apply(const UnitaryOp& u, const PureState& s, const std::vector<std::string>& targets) {
    TargetView tv(s.layout(), targets);
    if (u.dim() != tv.tdim) throw std::invalid_argument("apply: unitary dimension != product of target dims");
    std::vector<long> offsets(tv.tdim);
    for (long t = 0; t < tv.tdim; ++t) offsets[t] = tv.target_offset(t);
    Vec out = s.amplitudes();
    Vec block(tv.tdim);
    for (long base : tv.bases) {
        for (long t = 0; t < tv.tdim; ++t) block(t) = out(base + offsets[t]);
        Vec res = u.matrix() * block;
        for (long t = 0; t < tv.tdim; ++t) out(base + offsets[t]) = res(t);
    }
    return PureState(s.layout(), std::move(out));
}

DensityMatrix apply(const UnitaryOp& u, const DensityMatrix& s, const std::vector<std::string>& targets) {
    TargetView tv(s.layout(), targets);
    if (u.dim() != tv.tdim) throw std::invalid_argument("apply: unitary dimension != product of target dims");
    // Build the embedded unitary once; dims are desk-scale.
    std::vector<long> offsets(tv.tdim);
    for (long t = 0; t < tv.tdim; ++t) offsets[t] = tv.target_offset(t);
    Mat big = Mat::Zero(s.dim(), s.dim());
    for (long base : tv.bases)
        for (long t1 = 0; t1 < tv.tdim; ++t1)
            for (long t2 = 0; t2 < tv.tdim; ++t2) big(base + offsets[t1], base + offsets[t2]) = u.matrix()(t1, t2);
    Mat out = big * s.matrix() * big.adjoint();
    return DensityMatrix(s.layout(), std::move(out));
}

// ---- Measurement ----

std::vector<double> outcome_probabilities(const PureState& s, const std::vector<std::string>& targets) {
    TargetView tv(s.layout(), targets);
    std::vector<double> probs(tv.tdim, 0.0);
    for (long t = 0; t < tv.tdim; ++t) {
        long off = tv.target_offset(t);
        double p = 0.0;
        for (long base : tv.bases) p += std::norm(s.amplitudes()(base + off));
        probs[t] = p;
    }
    return probs;
}

std::pair<double, PureState> project_outcome(const PureState& s, const std::vector<std::string>& targets,
                                             const std::vector<long>& outcome) {
    TargetView tv(s.layout(), targets);
    if (outcome.size() != targets.size()) throw std::invalid_argument("project_outcome: outcome size mismatch");
    long tflat = 0;
    for (size_t k = 0; k < outcome.size(); ++k) tflat = tflat * tv.tdims[k] + outcome[k];
    long off = tv.target_offset(tflat);
    Vec v = Vec::Zero(s.dim());
    double p = 0.0;
    for (long base : tv.bases) {
        v(base + off) = s.amplitudes()(base + off);
        p += std::norm(s.amplitudes()(base + off));
    }
    if (p <= 0.0) return {0.0, s};
    return {p, PureState(s.layout(), v / std::sqrt(p))};
}

MeasureResult measure_computational(const PureState& s, const std::vector<std::string>& targets, RngStream& rng) {
    for (const auto& t : targets)
        if (s.layout().local_dim(t) != 2) throw std::invalid_argument("measure_computational: non-qubit target " + t);
    auto probs = outcome_probabilities(s, targets);
    double total = 0.0;
    for (double p : probs) total += p;
    if (total < 1e-12) throw std::runtime_error("measure_computational: zero-norm branch (state corrupted)");
    double r = rng.uniform() * total;
    long pick = 0;
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (r < acc) {
            pick = static_cast<long>(i);
            break;
        }
        pick = static_cast<long>(i);
    }
    std::vector<long> digits(targets.size());
    long rem = pick;
    for (size_t k = targets.size(); k-- > 0;) {
        digits[k] = rem & 1;
        rem >>= 1;
    }
    auto [p, post] = project_outcome(s, targets, digits);
    if (p <= 0.0) throw std::runtime_error("measure_computational: zero-norm branch (state corrupted)");
    Bits out(targets.size());
    for (size_t k = 0; k < targets.size(); ++k) out.set(k, static_cast<int>(digits[k]));
    return {out, post};
}

PureState remove_basis_registers(const PureState& s, const std::vector<std::string>& names) {
    PureState cur = s;
    for (const auto& n : names) {
        const auto& lay = cur.layout();
        size_t idx = lay.index_of(n);
        long d = lay.local_dim(idx);
        // Find the populated branch.
        auto probs = outcome_probabilities(cur, {n});
        long val = -1;
        for (long v = 0; v < d; ++v) {
            if (probs[v] > 1e-9) {
                if (val >= 0) throw std::invalid_argument("remove_basis_registers: register " + n + " not collapsed");
                val = v;
            }
        }
        std::vector<std::pair<std::string, long>> regs;
        for (size_t i = 0; i < lay.num_registers(); ++i)
            if (i != idx) regs.emplace_back(lay.name(i), lay.local_dim(i));
        RegisterLayout out_lay(regs, lay.dim_cap());
        Vec v(out_lay.dim());
        for (long f = 0; f < out_lay.dim(); ++f) {
            auto digits = out_lay.digits_of(f);
            std::vector<long> full(lay.num_registers());
            for (size_t i = 0, j = 0; i < lay.num_registers(); ++i) full[i] = (i == idx) ? val : digits[j++];
            v(f) = cur.amplitudes()(lay.flat_of(full));
        }
        double norm = v.norm();
        cur = PureState(std::move(out_lay), v / norm);
    }
    return cur;
}

// ---- Haar sampling ----

UnitaryOp haar_unitary(long dim, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("haar_unitary: dim >= 1 required");
    Mat g(dim, dim);
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j) g(i, j) = cx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix phases so the distribution is exactly Haar.
    for (long j = 0; j < dim; ++j) {
        cx d = r(j, j);
        cx phase = (std::abs(d) > 0) ? d / std::abs(d) : cx(1.0, 0.0);
        q.col(j) *= phase;
    }
    return UnitaryOp(std::move(q));
}

// ---- Purification / distances ----

Mat psd_sqrt(const Mat& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -tol) throw std::invalid_argument("psd_sqrt: matrix not PSD within tolerance");
    Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

PureState canonical_purification(const DensityMatrix& sigma, const std::string& bname) {
    long n = sigma.dim();
    Mat root = psd_sqrt(sigma.matrix());
    // |phi> = sum_ij sqrt(sigma)_{ij} |i>_A |j>_B. Tr_B gives
    // sqrt(sigma) sqrt(sigma)^dag = sigma.
    Vec v(n * n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) v(i * n + j) = root(i, j);
    RegisterLayout b({{bname, n}}, sigma.layout().dim_cap() * n);
    RegisterLayout lay = sigma.layout().concat(b);
    return PureState(std::move(lay), std::move(v));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (!a.layout().same_as(b.layout())) throw std::invalid_argument("trace_distance: layout mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (!a.layout().same_as(b.layout())) throw std::invalid_argument("fidelity: layout mismatch");
    Mat ra = psd_sqrt(a.matrix());
    Mat rb = psd_sqrt(b.matrix());
    Eigen::JacobiSVD<Mat> svd(ra * rb);
    double s = svd.singularValues().sum();
    return std::min(1.0, s * s);
}

// ---- Gates ----

const Mat& pauli_x() {
    static const Mat m = (Mat(2, 2) << 0, 1, 1, 0).finished();
    return m;
}
const Mat& pauli_y() {
    static const Mat m = (Mat(2, 2) << cx(0, 0), cx(0, -1), cx(0, 1), cx(0, 0)).finished();
    return m;
}
const Mat& pauli_z() {
    static const Mat m = (Mat(2, 2) << 1, 0, 0, -1).finished();
    return m;
}
const Mat& hadamard() {
    static const Mat m = (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    return m;
}

std::string debug_json(const Mat& m) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (long i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (long j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << "[" << m(i, j).real() << "," << m(i, j).imag() << "]";
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string debug_json(const Vec& v) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (long i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << "[" << v(i).real() << "," << v(i).imag() << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace uenc

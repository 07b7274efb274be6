#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uenc/bits.hpp"
#include "uenc/common.hpp"
#include "uenc/rng.hpp"

namespace uenc {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Ordered list of named registers with local dimensions. Index arithmetic is
// mixed-radix with the FIRST register most significant, so |0>|1> on two
// qubits is amplitude index 1 of 4.
class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<std::pair<std::string, long>> regs, long dim_cap = kDefaultDimCap);

    static RegisterLayout qubits(const std::vector<std::string>& names, long dim_cap = kDefaultDimCap);
    // Registers named <prefix>0 .. <prefix>{n-1}, all qubits.
    static RegisterLayout qubit_range(const std::string& prefix, int n, long dim_cap = kDefaultDimCap);

    long dim() const { return dim_; }
    long dim_cap() const { return cap_; }
    size_t num_registers() const { return regs_.size(); }
    const std::string& name(size_t i) const { return regs_[i].first; }
    long local_dim(size_t i) const { return regs_[i].second; }
    long local_dim(const std::string& name) const { return regs_[index_of(name)].second; }
    bool has(const std::string& name) const;
    size_t index_of(const std::string& name) const;

    // Stride of register i: amplitude index = sum_i digit_i * stride_i.
    long stride(size_t i) const;
    std::vector<long> digits_of(long flat) const;
    long flat_of(const std::vector<long>& digits) const;

    RegisterLayout concat(const RegisterLayout& other) const;
    RegisterLayout renamed(const std::string& suffix) const;
    // Subset layout in the given order.
    RegisterLayout subset(const std::vector<std::string>& names) const;

    bool same_as(const RegisterLayout& other) const;

  private:
    std::vector<std::pair<std::string, long>> regs_;
    long dim_ = 1;
    long cap_ = kDefaultDimCap;
};

class UnitaryOp {
  public:
    UnitaryOp(Mat m, double tol = kStateTol);
    static UnitaryOp identity(long dim);
    const Mat& matrix() const { return m_; }
    long dim() const { return m_.rows(); }
    UnitaryOp dagger() const { return UnitaryOp(m_.adjoint()); }

  private:
    Mat m_;
};

class DensityMatrix;

class PureState {
  public:
    // Trivial scalar state on the empty layout.
    PureState() : layout_(), amps_(Vec::Ones(1)) {}
    PureState(RegisterLayout layout, Vec amps, double tol = kStateTol);
    // |basis> on the given layout.
    static PureState basis(RegisterLayout layout, long index);
    static PureState basis(RegisterLayout layout, const std::vector<long>& digits);
    // Computational basis state of a bitstring on qubit registers.
    static PureState from_bits(RegisterLayout layout, const Bits& bits);

    const RegisterLayout& layout() const { return layout_; }
    const Vec& amplitudes() const { return amps_; }
    long dim() const { return amps_.size(); }

    DensityMatrix to_density() const;
    double norm() const { return amps_.norm(); }
    PureState renamed(const std::string& suffix) const { return PureState(layout_.renamed(suffix), amps_); }

  private:
    RegisterLayout layout_;
    Vec amps_;
};

class DensityMatrix {
  public:
    DensityMatrix(RegisterLayout layout, Mat rho, double tol = kStateTol);

    const RegisterLayout& layout() const { return layout_; }
    const Mat& matrix() const { return rho_; }
    long dim() const { return rho_.rows(); }
    static DensityMatrix maximally_mixed(RegisterLayout layout);
    DensityMatrix renamed(const std::string& suffix) const { return DensityMatrix(layout_.renamed(suffix), rho_); }

  private:
    RegisterLayout layout_;
    Mat rho_;
};

// ---- Operations ----

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

// t-fold tensor power; register names get suffixes "@1".."@t".
PureState tensor_power(const PureState& s, int t);
DensityMatrix tensor_power(const DensityMatrix& s, int t);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
DensityMatrix partial_trace(const PureState& psi, const std::vector<std::string>& keep);

// Reorder registers; amplitudes permuted to match.
PureState permute_registers(const PureState& s, const std::vector<std::string>& order);
DensityMatrix permute_registers(const DensityMatrix& s, const std::vector<std::string>& order);

PureState apply(const UnitaryOp& u, const PureState& s, const std::vector<std::string>& targets);
DensityMatrix apply(const UnitaryOp& u, const DensityMatrix& s, const std::vector<std::string>& targets);

// Probability of each joint outcome (mixed-radix over targets, first target
// most significant).
std::vector<double> outcome_probabilities(const PureState& s, const std::vector<std::string>& targets);
// Project onto a given outcome; returns (probability, renormalized state).
// The measured registers remain in the layout, collapsed to |outcome>.
std::pair<double, PureState> project_outcome(const PureState& s, const std::vector<std::string>& targets,
                                             const std::vector<long>& outcome);

struct MeasureResult {
    Bits outcome;
    PureState post;
};
// Born-rule sample over qubit target registers.
MeasureResult measure_computational(const PureState& s, const std::vector<std::string>& targets, RngStream& rng);

// Drop registers that are in a definite basis state (post-measurement);
// throws if the register is still correlated with the rest.
PureState remove_basis_registers(const PureState& s, const std::vector<std::string>& names);

UnitaryOp haar_unitary(long dim, RngStream& rng);

// Canonical purification (sqrt(sigma) (x) I) sum_i |i>|i>; the purifying
// register is named `bname` and has dim(sigma).
PureState canonical_purification(const DensityMatrix& sigma, const std::string& bname = "B");

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Hermitian principal square root (eigenvalues clamped at 0; throws if an
// eigenvalue is below -tol).
Mat psd_sqrt(const Mat& m, double tol = kStateTol);

// Common single-qubit gates.
const Mat& pauli_x();
const Mat& pauli_y();
const Mat& pauli_z();
const Mat& hadamard();

// Debug dump as JSON text: arrays of [re, im] pairs, row-major.
std::string debug_json(const Mat& m);
std::string debug_json(const Vec& v);

}  // namespace uenc

#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "harvest/amplitudes.hpp"
#include "harvest/errors.hpp"

namespace harvest::two_qubit {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4cd;

// Basis order is fixed to {dd, uu, ud, du} (down = ground). Tensor-product
// operations go through the {dd, du, ud, uu} ordering; the two differ by the
// self-inverse swap of indices 1 and 3.
inline constexpr std::array<int, 4> kTensorIndex{0, 3, 2, 1};

enum class Bell { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

struct TwoQubitState {
    Matrix4 matrix = Matrix4::Zero();  // in the {dd, uu, ud, du} basis
    bool normalized = false;
    double raw_trace = 1.0;  // trace before normalization
    std::string source = "external";

    Matrix4 tensor() const;  // reordered to {dd, du, ud, uu}
    static TwoQubitState from_tensor(const Matrix4& m, std::string source);
    // hermiticity / unit trace / positivity (floor 1e-10)
    void validate() const;
};

// Eq.-(6)-patterned assembly from the amplitude set, then trace
// normalization. Throws PerturbativeRegimeError when the raw matrix fails
// positivity or the excitation weight is too large for second order.
TwoQubitState assemble_rho(const amplitudes::AmplitudeSet& amp);

// Transpose on the second factor; involutive and trace preserving.
Matrix4 partial_transpose(const TwoQubitState& rho);

// Sum of |negative eigenvalues| of the partial transpose; 0 iff PPT.
double negativity(const TwoQubitState& rho);

// Wootters concurrence in [0, 1].
double concurrence(const TwoQubitState& rho);

struct InseparabilityFlags {
    bool exchange_dominates = false;  // |<0|X_AB>|^2  >  |E_A|^2 |E_B|^2
    bool overlap_dominates = false;   // |<E_B|E_A>|^2 >  |X_AB|^2
    bool either() const { return exchange_dominates || overlap_dominates; }
};
InseparabilityFlags inseparability_inequalities(const amplitudes::AmplitudeSet&);

// Bell vectors in the {dd, uu, ud, du} basis.
Eigen::Vector4cd bell_vector(Bell b);
std::array<double, 4> bell_fidelities(const TwoQubitState& rho);
const char* bell_name(Bell b);

// 16 complex entries, row-major, with a basis tag.
void save_state_json(std::ostream& out, const TwoQubitState& rho);
void save_state_json(const std::filesystem::path& file, const TwoQubitState&);
TwoQubitState load_state_json(std::istream& in);
TwoQubitState load_state_json(const std::filesystem::path& file);
void save_state_text(std::ostream& out, const TwoQubitState& rho);
void save_state_text(const std::filesystem::path& file, const TwoQubitState&);
TwoQubitState load_state_text(std::istream& in);
TwoQubitState load_state_text(const std::filesystem::path& file);

}  // namespace harvest::two_qubit

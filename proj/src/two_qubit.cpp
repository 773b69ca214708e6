#include "harvest/two_qubit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace harvest::two_qubit {

namespace {

constexpr double kPsdFloor = 1e-10;
// excitation weight beyond which the second-order truncation is not trusted
constexpr double kWeightCeiling = 0.05;

Matrix4 permute(const Matrix4& m) {
    Matrix4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(kTensorIndex[i], kTensorIndex[j]) = m(i, j);
    return out;
}

void check_hermitian(const Matrix4& m, const char* what) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidInputError(std::string(what) + ": matrix is not Hermitian");
}

}  // namespace

Matrix4 TwoQubitState::tensor() const { return permute(matrix); }

TwoQubitState TwoQubitState::from_tensor(const Matrix4& m, std::string source) {
    TwoQubitState s;
    s.matrix = permute(m);  // the permutation is its own inverse
    s.source = std::move(source);
    s.normalized = std::abs(m.trace().real() - 1.0) < 1e-12;
    s.raw_trace = m.trace().real();
    return s;
}

void TwoQubitState::validate() const {
    check_hermitian(matrix, "two-qubit state");
    if (normalized && std::abs(matrix.trace().real() - 1.0) > 1e-10)
        throw InvalidInputError("two-qubit state: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix4> es(matrix);
    if (es.eigenvalues().minCoeff() < -kPsdFloor)
        throw InvalidInputError("two-qubit state: not positive semidefinite");
}

TwoQubitState assemble_rho(const amplitudes::AmplitudeSet& amp) {
    amp.validate();
    Matrix4 raw = Matrix4::Zero();
    raw(0, 0) = 1.0;
    raw(0, 1) = -std::conj(amp.x0);  // -<X_AB|0>
    raw(1, 0) = -amp.x0;             // -<0|X_AB>
    raw(1, 1) = amp.x2;
    raw(2, 2) = amp.ea2;
    raw(2, 3) = std::conj(amp.eab);  // <E_B|E_A>
    raw(3, 2) = amp.eab;             // <E_A|E_B>
    raw(3, 3) = amp.eb2;

    const double tr = raw.trace().real();
    const double weight = (amp.x2 + amp.ea2 + amp.eb2) / tr;
    if (weight > kWeightCeiling) {
        std::ostringstream msg;
        msg << "assemble_rho: excitation weight " << weight
            << " exceeds the perturbative ceiling " << kWeightCeiling
            << "; second-order amplitudes are not trustworthy here";
        throw PerturbativeRegimeError(msg.str());
    }

    TwoQubitState rho;
    rho.matrix = raw / tr;
    rho.raw_trace = tr;
    rho.normalized = true;
    rho.source = "eq6-amplitudes";

    Eigen::SelfAdjointEigenSolver<Matrix4> es(rho.matrix);
    if (es.eigenvalues().minCoeff() < -kPsdFloor) {
        std::ostringstream msg;
        msg << "assemble_rho: density matrix not positive (min eigenvalue "
            << es.eigenvalues().minCoeff()
            << "); amplitudes inconsistent or coupling too large";
        throw PerturbativeRegimeError(msg.str());
    }
    return rho;
}

Matrix4 partial_transpose(const TwoQubitState& rho) {
    const Matrix4 t = rho.tensor();
    Matrix4 pt;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    pt(2 * a + b, 2 * ap + bp) = t(2 * a + bp, 2 * ap + b);
    return permute(pt);
}

double negativity(const TwoQubitState& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(partial_transpose(rho));
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()(i) < 0.0) sum -= es.eigenvalues()(i);
    return sum;
}

double concurrence(const TwoQubitState& rho) {
    const Matrix4 t = rho.tensor();
    Matrix4 yy = Matrix4::Zero();  // sigma_y (x) sigma_y in the tensor basis
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Matrix4 rr = t * yy * t.conjugate() * yy;
    Eigen::ComplexEigenSolver<Matrix4> es(rr);
    std::array<double, 4> mu{};
    for (int i = 0; i < 4; ++i)
        mu[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    std::sort(mu.begin(), mu.end(), std::greater<>());
    return std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
}

InseparabilityFlags inseparability_inequalities(
    const amplitudes::AmplitudeSet& amp) {
    amp.validate();
    InseparabilityFlags f;
    f.exchange_dominates = std::norm(amp.x0) > amp.ea2 * amp.eb2;
    f.overlap_dominates = std::norm(amp.eab) > amp.x2;
    return f;
}

Eigen::Vector4cd bell_vector(Bell b) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();  // {dd, uu, ud, du} basis
    switch (b) {
        case Bell::PhiPlus:
            v(0) = s;
            v(1) = s;
            break;
        case Bell::PhiMinus:
            v(0) = s;
            v(1) = -s;
            break;
        case Bell::PsiPlus:
            v(2) = s;
            v(3) = s;
            break;
        case Bell::PsiMinus:
            v(2) = s;
            v(3) = -s;
            break;
    }
    return v;
}

std::array<double, 4> bell_fidelities(const TwoQubitState& rho) {
    std::array<double, 4> f{};
    for (int b = 0; b < 4; ++b) {
        const Eigen::Vector4cd v = bell_vector(static_cast<Bell>(b));
        f[b] = (v.adjoint() * rho.matrix * v)(0).real();
    }
    return f;
}

const char* bell_name(Bell b) {
    switch (b) {
        case Bell::PhiPlus: return "phi+";
        case Bell::PhiMinus: return "phi-";
        case Bell::PsiPlus: return "psi+";
        case Bell::PsiMinus: return "psi-";
    }
    return "?";
}

namespace {

constexpr const char* kBasisTag = "dd uu ud du";

TwoQubitState state_from_entries(const std::vector<double>& re,
                                 const std::vector<double>& im,
                                 bool normalized, double raw_trace,
                                 std::string source) {
    TwoQubitState s;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            s.matrix(i, j) = Complex(re[4 * i + j], im[4 * i + j]);
    s.normalized = normalized;
    s.raw_trace = raw_trace;
    s.source = std::move(source);
    check_hermitian(s.matrix, "state file");
    return s;
}

}  // namespace

void save_state_json(std::ostream& out, const TwoQubitState& rho) {
    nlohmann::json j;
    j["basis"] = kBasisTag;
    j["normalized"] = rho.normalized;
    j["raw_trace"] = rho.raw_trace;
    j["source"] = rho.source;
    std::vector<double> re, im;
    for (int i = 0; i < 4; ++i)
        for (int jj = 0; jj < 4; ++jj) {
            re.push_back(rho.matrix(i, jj).real());
            im.push_back(rho.matrix(i, jj).imag());
        }
    j["matrix_re"] = re;
    j["matrix_im"] = im;
    out << j.dump(2) << "\n";
}

void save_state_json(const std::filesystem::path& file,
                     const TwoQubitState& rho) {
    std::ofstream out(file);
    if (!out) throw InvalidInputError("cannot write " + file.string());
    save_state_json(out, rho);
}

TwoQubitState load_state_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("state file: bad JSON: ") + e.what());
    }
    if (j.value("basis", std::string{}) != kBasisTag)
        throw InvalidInputError("state file: basis tag must be '" +
                                std::string(kBasisTag) + "'");
    const auto re = j.at("matrix_re").get<std::vector<double>>();
    const auto im = j.at("matrix_im").get<std::vector<double>>();
    if (re.size() != 16 || im.size() != 16)
        throw InvalidInputError("state file: need 16 row-major entries");
    return state_from_entries(re, im, j.value("normalized", true),
                              j.value("raw_trace", 1.0),
                              j.value("source", std::string("external")));
}

TwoQubitState load_state_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInputError("cannot open " + file.string());
    return load_state_json(in);
}

void save_state_text(std::ostream& out, const TwoQubitState& rho) {
    out << "# two-qubit state, basis " << kBasisTag
        << ", rows of (re im) pairs\n";
    char buf[64];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", rho.matrix(i, j).real(),
                          rho.matrix(i, j).imag());
            out << buf << (j == 3 ? "\n" : "  ");
        }
    }
}

void save_state_text(const std::filesystem::path& file,
                     const TwoQubitState& rho) {
    std::ofstream out(file);
    if (!out) throw InvalidInputError("cannot write " + file.string());
    save_state_text(out, rho);
}

TwoQubitState load_state_text(std::istream& in) {
    std::vector<double> re(16), im(16);
    std::string line;
    int row = 0;
    while (row < 4 && std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        for (int j = 0; j < 4; ++j) {
            if (!(ls >> re[4 * row + j] >> im[4 * row + j]))
                throw InvalidInputError(
                    "state file: each row needs four (re im) pairs");
        }
        ++row;
    }
    if (row != 4) throw InvalidInputError("state file: expected four matrix rows");
    return state_from_entries(re, im, true, 1.0, "external");
}

TwoQubitState load_state_text(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInputError("cannot open " + file.string());
    return load_state_text(in);
}

}  // namespace harvest::two_qubit

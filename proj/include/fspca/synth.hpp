#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/matrix.hpp"
#include "fspca/rng.hpp"

namespace fspca {

/// Declarative description of a synthetic covariance.
///
/// The built-in schemes:
///   A  spectrum {100, 100, 4, 1, ..., 1},  random eigenspace
///   B  spectrum {300, 180, 60, 1, ..., 1}, random eigenspace
///   C  spectrum {300, 180, 60, 0, ..., 0}, random eigenspace (rank 3)
///   D  spectrum {160, 80, 40, 20, 10, 5, 2, 1, ..., 1}, random eigenspace
///   E  A = X X' with X (d x n) iid Uniform[0, 1]
///   F  A = X X' with X (d x n) iid Normal(0, 1)
///   zipf  spectrum c * i^(-t), i = 1..d, random eigenspace
struct SchemeSpec {
    enum class Kind { fixed_spectrum, uniform_data, gaussian_data, zipf };

    Kind kind = Kind::fixed_spectrum;
    int d = 1;
    std::uint64_t seed = 0;
    std::vector<double> spectrum;  // fixed_spectrum: leading values, length <= d
    double pad_value = 0.0;        // fixed_spectrum: fills positions beyond `spectrum`
    int n = 0;                     // data schemes: sample count, 0 means n = d
    double zipf_c = 1.0;
    double zipf_t = 2.0;

    void validate() const {
        if (d < 1) throw input_error("scheme: d must be >= 1");
        if (kind == Kind::fixed_spectrum) {
            if (spectrum.empty() || static_cast<int>(spectrum.size()) > d)
                throw input_error("scheme: spectrum length must be in [1, d]");
            for (double v : spectrum)
                if (!(v >= 0.0)) throw input_error("scheme: spectrum values must be nonnegative");
            if (pad_value < 0.0) throw input_error("scheme: pad value must be nonnegative");
        }
        if (kind == Kind::zipf && !(zipf_t > 1.0 && zipf_c > 0.0))
            throw input_error("scheme: zipf needs t > 1 and c > 0");
        if ((kind == Kind::uniform_data || kind == Kind::gaussian_data) && n < 0)
            throw input_error("scheme: n must be >= 0");
    }

    /// Full-length eigenvalue target for the spectrum-based kinds.
    std::vector<double> full_spectrum() const {
        std::vector<double> values;
        if (kind == Kind::fixed_spectrum) {
            values = spectrum;
            values.resize(static_cast<std::size_t>(d), pad_value);
        } else if (kind == Kind::zipf) {
            values.reserve(static_cast<std::size_t>(d));
            for (int i = 1; i <= d; ++i)
                values.push_back(zipf_c * std::pow(static_cast<double>(i), -zipf_t));
        }
        return values;
    }
};

/// Named scheme presets; `name` is one of A..F.
inline SchemeSpec scheme_preset(char name, int d, std::uint64_t seed, int n = 0) {
    SchemeSpec spec;
    spec.d = d;
    spec.seed = seed;
    spec.n = n;
    switch (name) {
        case 'A':
            spec.spectrum = {100, 100, 4};
            spec.pad_value = 1.0;
            break;
        case 'B':
            spec.spectrum = {300, 180, 60};
            spec.pad_value = 1.0;
            break;
        case 'C':
            spec.spectrum = {300, 180, 60};
            spec.pad_value = 0.0;
            break;
        case 'D':
            spec.spectrum = {160, 80, 40, 20, 10, 5, 2};
            spec.pad_value = 1.0;
            break;
        case 'E':
            spec.kind = SchemeSpec::Kind::uniform_data;
            break;
        case 'F':
            spec.kind = SchemeSpec::Kind::gaussian_data;
            break;
        default:
            throw input_error(std::string("unknown scheme '") + name + "' (expected A..F)");
    }
    if (spec.kind == SchemeSpec::Kind::fixed_spectrum &&
        static_cast<int>(spec.spectrum.size()) > d)
        spec.spectrum.resize(static_cast<std::size_t>(d));
    spec.validate();
    return spec;
}

inline SchemeSpec zipf_scheme(int d, double c, double t, std::uint64_t seed) {
    SchemeSpec spec;
    spec.kind = SchemeSpec::Kind::zipf;
    spec.d = d;
    spec.seed = seed;
    spec.zipf_c = c;
    spec.zipf_t = t;
    spec.validate();
    return spec;
}

/// Orthonormalized standard-Gaussian d x d matrix (Haar up to the sign
/// convention).  The Gaussian block is filled column-major.
inline Eigen::MatrixXd random_orthogonal(int d, Rng& rng) {
    if (d < 1) throw input_error("random_orthogonal: d must be >= 1");
    Eigen::MatrixXd gaussian(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) gaussian(i, j) = rng.gaussian();
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ() *
                        Eigen::MatrixXd::Identity(d, d);
    apply_sign_convention(q);
    return q;
}

/// Materialize the covariance a scheme describes.  Spectrum kinds build
/// Q diag(lambda) Q' with a seeded random orthogonal Q; data kinds sample
/// X (d x n) and return X X' uncentered.
inline SymMat make_covariance(const SchemeSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    switch (spec.kind) {
        case SchemeSpec::Kind::fixed_spectrum:
        case SchemeSpec::Kind::zipf: {
            const std::vector<double> values = spec.full_spectrum();
            const Eigen::Map<const Eigen::VectorXd> lambda(values.data(),
                                                           static_cast<Eigen::Index>(values.size()));
            const Eigen::MatrixXd q = random_orthogonal(spec.d, rng);
            Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
            return SymMat(std::move(a));
        }
        case SchemeSpec::Kind::uniform_data:
        case SchemeSpec::Kind::gaussian_data: {
            const int n = spec.n > 0 ? spec.n : spec.d;
            Eigen::MatrixXd x(spec.d, n);
            const bool uniform = spec.kind == SchemeSpec::Kind::uniform_data;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < spec.d; ++i)
                    x(i, j) = uniform ? rng.uniform01() : rng.gaussian();
            return SymMat(Eigen::MatrixXd(x * x.transpose()));
        }
    }
    throw input_error("scheme: unknown kind");
}

/// Gram matrix of the data, optionally after removing each row's mean
/// (multiplying by the centering matrix I - (1/n) 1 1' on the right).
inline SymMat sample_covariance(const Eigen::MatrixXd& x, bool center) {
    if (x.cols() < 1 || x.rows() < 1)
        throw input_error("sample_covariance: data must be non-empty");
    if (!x.allFinite()) throw input_error("sample_covariance: data contains NaN/Inf");
    if (!center) return SymMat(Eigen::MatrixXd(x * x.transpose()));
    const Eigen::VectorXd row_means = x.rowwise().mean();
    const Eigen::MatrixXd centered = x.colwise() - row_means;
    return SymMat(Eigen::MatrixXd(centered * centered.transpose()));
}

}  // namespace fspca

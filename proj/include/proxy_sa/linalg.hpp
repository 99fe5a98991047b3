#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "proxy_sa/errors.hpp"

namespace proxy_sa {

// N x N symmetric positive semi-definite matrix (output covariance, D_u,
// weighted derivative outer-product integrals). Stored dense; N is small.
class CovMatrix {
public:
    CovMatrix() = default;
    explicit CovMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw ShapeError("CovMatrix: matrix must be square");
        }
    }

    static CovMatrix zero(int n) { return CovMatrix(Eigen::MatrixXd::Zero(n, n)); }

    const Eigen::MatrixXd& matrix() const { return m_; }
    int size() const { return static_cast<int>(m_.rows()); }

    double trace() const { return m_.trace(); }

    // Frobenius norm; the 1x1 case returns |entry| exactly so that the two
    // normalized proxy types agree bitwise for single-output models.
    double frobenius() const {
        if (size() == 1) return std::abs(m_(0, 0));
        return m_.norm();
    }

    double max_symmetry_defect() const {
        return (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Numerical PSD check: symmetric within 1e-12 absolute and
    // eigenvalues >= -1e-10 * trace.
    bool is_psd() const {
        if (max_symmetry_defect() > 1e-12) return false;
        return min_eigenvalue() >= -1e-10 * std::abs(trace()) - 1e-300;
    }

    CovMatrix symmetrized() const { return CovMatrix(0.5 * (m_ + m_.transpose())); }

    CovMatrix operator+(const CovMatrix& o) const { return CovMatrix(m_ + o.m_); }
    CovMatrix operator-(const CovMatrix& o) const { return CovMatrix(m_ - o.m_); }
    CovMatrix scaled(double s) const { return CovMatrix(s * m_); }

private:
    Eigen::MatrixXd m_;
};

// Neumaier compensated accumulator. Deterministic for a fixed add order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace proxy_sa

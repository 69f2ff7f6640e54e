#include <Eigen/Dense>

#include "eog/dsp/ops.hpp"
#include "eog/error.hpp"

namespace eog::dsp {

namespace {

// Hat matrix A (A^T A)^-1 A^T of the polynomial design on positions -m..m. Row i maps a
// window of samples to the fitted value at position i. Positions are scaled to [-1, 1] for
// conditioning; the projection does not depend on the column scaling.
Eigen::MatrixXd projection(std::size_t window, int order) {
    const auto w = static_cast<Eigen::Index>(window);
    const double m = static_cast<double>(window / 2);
    Eigen::MatrixXd a(w, order + 1);
    for (Eigen::Index i = 0; i < w; ++i) {
        const double t = m > 0 ? (static_cast<double>(i) - m) / m : 0.0;
        double p = 1.0;
        for (int j = 0; j <= order; ++j) {
            a(i, j) = p;
            p *= t;
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(w, order + 1);
    return q * q.transpose();
}

}  // namespace

std::vector<double> savgol_smooth(std::span<const double> seq, std::size_t window, int poly_order) {
    if (window == 0 || window % 2 == 0) throw InvalidParameter("Savitzky-Golay window must be odd");
    if (poly_order < 0) throw InvalidParameter("Savitzky-Golay order must be non-negative");
    if (static_cast<std::size_t>(poly_order) >= window) {
        throw InvalidParameter("Savitzky-Golay order must be smaller than the window");
    }
    const std::size_t n = seq.size();
    if (n < window) throw InvalidParameter("sequence shorter than the Savitzky-Golay window");

    const Eigen::MatrixXd hat = projection(window, poly_order);
    const std::size_t m = window / 2;
    std::vector<double> out(n);

    const auto centre = hat.row(static_cast<Eigen::Index>(m));
    for (std::size_t i = m; i + m < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < window; ++j) acc += centre(static_cast<Eigen::Index>(j)) * seq[i - m + j];
        out[i] = acc;
    }
    for (std::size_t i = 0; i < m; ++i) {
        double head = 0.0;
        double tail = 0.0;
        const auto row_head = hat.row(static_cast<Eigen::Index>(i));
        const auto row_tail = hat.row(static_cast<Eigen::Index>(m + 1 + i));
        for (std::size_t j = 0; j < window; ++j) {
            head += row_head(static_cast<Eigen::Index>(j)) * seq[j];
            tail += row_tail(static_cast<Eigen::Index>(j)) * seq[n - window + j];
        }
        out[i] = head;
        out[n - m + i] = tail;
    }
    return out;
}

}  // namespace eog::dsp

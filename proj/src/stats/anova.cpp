#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>

#include "eog/error.hpp"
#include "eog/stats.hpp"

namespace eog::stats {

namespace {

void check_matrix(const Eigen::MatrixXd& data) {
    if (data.rows() < 2 || data.cols() < 2) {
        throw InvalidParameter("repeated-measures ANOVA needs at least 2 subjects and 2 conditions");
    }
    if (!data.allFinite()) throw InvalidParameter("repeated-measures ANOVA needs a complete, finite matrix");
}

double f_survival(double f, double df1, double df2) {
    if (std::isinf(f)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<double>(df1, df2), f));
}

}  // namespace

double greenhouse_geisser_epsilon(const Eigen::MatrixXd& data) {
    check_matrix(data);
    const auto k = static_cast<double>(data.cols());
    const Eigen::MatrixXd centred = data.rowwise() - data.colwise().mean();
    const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(data.rows() - 1);
    const Eigen::VectorXd row_mean = cov.rowwise().mean();
    const Eigen::RowVectorXd col_mean = cov.colwise().mean();
    Eigen::MatrixXd dc = cov;
    dc.colwise() -= row_mean;
    dc.rowwise() -= col_mean;
    dc.array() += cov.mean();
    const double tr = dc.trace();
    const double tr2 = (dc * dc).trace();
    if (!(tr2 > 0.0)) return 1.0;
    const double eps = tr * tr / ((k - 1.0) * tr2);
    return std::clamp(eps, 1.0 / (k - 1.0), 1.0);
}

TestReport rm_anova_gg(const Eigen::MatrixXd& data) {
    check_matrix(data);
    const auto n = static_cast<double>(data.rows());
    const auto k = static_cast<double>(data.cols());
    const double grand = data.mean();
    const double ss_total = (data.array() - grand).square().sum();
    const double ss_subjects = k * (data.rowwise().mean().array() - grand).square().sum();
    const double ss_conditions = n * (data.colwise().mean().array() - grand).square().sum();
    const double ss_error = std::max(ss_total - ss_subjects - ss_conditions, 0.0);
    const double df1 = k - 1.0;
    const double df2 = (k - 1.0) * (n - 1.0);
    const double eps = greenhouse_geisser_epsilon(data);

    // Sums of squares below this relative size are rounding residue.
    const double tiny = 1e-12 * std::max(ss_total, 1e-300);
    double f = 0.0;
    double p = 1.0;
    double p_unc = 1.0;
    if (ss_conditions > tiny) {
        f = ss_error > tiny ? (ss_conditions / df1) / (ss_error / df2) : std::numeric_limits<double>::infinity();
        p_unc = f_survival(f, df1, df2);
        p = f_survival(f, df1 * eps, df2 * eps);
    }

    TestReport r;
    r.test = "rm_anova_gg";
    r.statistic = f;
    r.p_value = p;
    r.detail = {{"ss_conditions", ss_conditions},
                {"ss_subjects", ss_subjects},
                {"ss_error", ss_error},
                {"df1", df1},
                {"df2", df2},
                {"epsilon", eps},
                {"df1_gg", df1 * eps},
                {"df2_gg", df2 * eps},
                {"p_uncorrected", p_unc}};
    return r;
}

}  // namespace eog::stats

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "infmax/format.hpp"

namespace infmax {

/// Rectangular results table: one row per problem, one column per method.
struct ResultMatrix {
    std::vector<std::string> problems;
    std::vector<std::string> methods;
    std::vector<std::vector<double>> values;  // values[row][col]
    bool higher_is_better = true;

    std::size_t rows() const { return problems.size(); }
    std::size_t cols() const { return methods.size(); }

    void validate() const {
        if (values.size() != problems.size()) throw std::invalid_argument("row count mismatch");
        for (const auto& row : values)
            if (row.size() != methods.size()) throw std::invalid_argument("matrix is not rectangular");
    }
};

/// Average rank per method: within each row the best value gets rank 1,
/// ties share the mean of the ranks they span.
inline std::vector<double> friedman_ranks(const ResultMatrix& m) {
    m.validate();
    if (m.cols() < 2) throw std::invalid_argument("need at least two methods");
    if (m.rows() < 2) throw std::invalid_argument("need at least two problems");
    const std::size_t k = m.cols();
    std::vector<double> mean_rank(k, 0.0);
    std::vector<std::size_t> order(k);
    for (const auto& row : m.values) {
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return m.higher_is_better ? row[a] > row[b] : row[a] < row[b];
        });
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
            const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t t = i; t <= j; ++t) mean_rank[order[t]] += shared;
            i = j + 1;
        }
    }
    for (double& r : mean_rank) r /= static_cast<double>(m.rows());
    return mean_rank;
}

/// Friedman chi-square statistic over the average ranks.
inline double friedman_statistic(const std::vector<double>& ranks, std::size_t n, std::size_t k) {
    if (ranks.size() != k || k < 2 || n < 2) throw std::invalid_argument("bad rank vector");
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    double sum_sq = 0.0;
    for (double r : ranks) sum_sq += r * r;
    return 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
}

/// F-distributed refinement of the Friedman statistic. The chi-square
/// value is capped at n(k-1); at the cap the statistic degenerates to
/// +infinity (perfectly consistent rankings).
inline double iman_davenport(double friedman_stat, std::size_t n, std::size_t k) {
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double denom = nd * (kd - 1.0) - friedman_stat;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return (nd - 1.0) * friedman_stat / denom;
}

inline double chi_squared_pvalue(double stat, std::size_t dof) {
    if (std::isinf(stat)) return 0.0;
    boost::math::chi_squared dist(static_cast<double>(dof));
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
}

inline double f_pvalue(double stat, std::size_t dof1, std::size_t dof2) {
    if (std::isinf(stat)) return 0.0;
    boost::math::fisher_f dist(static_cast<double>(dof1), static_cast<double>(dof2));
    return boost::math::cdf(boost::math::complement(dist, std::max(0.0, stat)));
}

/// Lower tail of the standard normal.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Holm step-down adjustment: APV_i = min(1, max_{j<=i} (m-j+1) p_j) for
/// the i-th smallest of the input p-values. Input must be ascending.
inline std::vector<double> holm_adjust(const std::vector<double>& pvals, std::size_t m) {
    if (!std::is_sorted(pvals.begin(), pvals.end()))
        throw std::invalid_argument("p-values must be sorted ascending");
    if (m < pvals.size()) throw std::invalid_argument("m smaller than the number of p-values");
    std::vector<double> adjusted(pvals.size());
    double running = 0.0;
    for (std::size_t j = 0; j < pvals.size(); ++j) {
        running = std::max(running, static_cast<double>(m - j) * pvals[j]);
        adjusted[j] = std::min(1.0, running);
    }
    return adjusted;
}

struct HolmRow {
    std::string method;
    double z = 0.0;
    double p = 0.0;
    double adjusted = 0.0;
};

struct ComparisonReport {
    std::vector<std::string> methods;
    std::vector<double> mean_ranks;  // aligned with methods
    double friedman_stat = 0.0;
    double friedman_p = 1.0;
    double iman_davenport_stat = 0.0;
    double iman_davenport_p = 1.0;
    std::string control;          // method with the best (lowest) mean rank
    std::vector<HolmRow> posthoc;  // ascending by unadjusted p
};

/// Full comparison: Friedman ranks and statistic, Iman-Davenport
/// refinement, and a Holm table of every method against the best-ranked
/// control via z = (R_control - R_j) / sqrt(k(k+1)/(6n)).
inline ComparisonReport compare_methods(const ResultMatrix& m) {
    ComparisonReport report;
    report.methods = m.methods;
    report.mean_ranks = friedman_ranks(m);
    const std::size_t n = m.rows();
    const std::size_t k = m.cols();
    report.friedman_stat = friedman_statistic(report.mean_ranks, n, k);
    report.friedman_p = chi_squared_pvalue(report.friedman_stat, k - 1);
    report.iman_davenport_stat = iman_davenport(report.friedman_stat, n, k);
    report.iman_davenport_p = f_pvalue(report.iman_davenport_stat, k - 1, (n - 1) * (k - 1));

    std::size_t control = 0;
    for (std::size_t j = 1; j < k; ++j)
        if (report.mean_ranks[j] < report.mean_ranks[control]) control = j;
    report.control = m.methods[control];

    const double se = std::sqrt(static_cast<double>(k) * (static_cast<double>(k) + 1.0) /
                                (6.0 * static_cast<double>(n)));
    for (std::size_t j = 0; j < k; ++j) {
        if (j == control) continue;
        HolmRow row;
        row.method = m.methods[j];
        row.z = (report.mean_ranks[control] - report.mean_ranks[j]) / se;
        row.p = normal_cdf(row.z);
        report.posthoc.push_back(row);
    }
    std::sort(report.posthoc.begin(), report.posthoc.end(), [](const HolmRow& a, const HolmRow& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.method < b.method;
    });
    std::vector<double> pvals;
    pvals.reserve(report.posthoc.size());
    for (const HolmRow& row : report.posthoc) pvals.push_back(row.p);
    const std::vector<double> adjusted = holm_adjust(pvals, pvals.size());
    for (std::size_t j = 0; j < adjusted.size(); ++j) report.posthoc[j].adjusted = adjusted[j];
    return report;
}

/// CSV round-trip: header "problem,<method>,...", one row per problem.
inline void write_result_matrix_csv(const ResultMatrix& m, std::ostream& out) {
    m.validate();
    out << "problem";
    for (const std::string& name : m.methods) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << m.problems[i];
        for (double v : m.values[i]) out << ',' << fmt_double(v);
        out << '\n';
    }
}

inline ResultMatrix read_result_matrix_csv(std::istream& in) {
    ResultMatrix m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream fields(line);
        std::string cell;
        std::vector<std::string> tokens;
        while (std::getline(fields, cell, ',')) tokens.push_back(cell);
        if (line_no == 1) {
            if (tokens.size() < 2) throw std::runtime_error("result matrix header needs >= 2 columns");
            m.methods.assign(tokens.begin() + 1, tokens.end());
            continue;
        }
        if (tokens.size() != m.methods.size() + 1)
            throw std::runtime_error("result matrix line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(m.methods.size() + 1) +
                                     " fields, got " + std::to_string(tokens.size()));
        m.problems.push_back(tokens[0]);
        std::vector<double> row;
        row.reserve(m.methods.size());
        for (std::size_t j = 1; j < tokens.size(); ++j) {
            try {
                row.push_back(std::stod(tokens[j]));
            } catch (const std::exception&) {
                throw std::runtime_error("result matrix line " + std::to_string(line_no) +
                                         ": bad number '" + tokens[j] + "'");
            }
        }
        m.values.push_back(std::move(row));
    }
    if (m.methods.empty() || m.values.empty()) throw std::runtime_error("empty result matrix");
    return m;
}

/// Report dump: rank block, the two statistics, then the Holm table.
inline void write_report_csv(const ComparisonReport& report, std::ostream& out) {
    out << "section,method,stat,p,adjusted\n";
    for (std::size_t j = 0; j < report.methods.size(); ++j)
        out << "mean_rank," << report.methods[j] << ',' << fmt_double(report.mean_ranks[j])
            << ",,\n";
    out << "friedman,," << fmt_double(report.friedman_stat) << ',' << fmt_double(report.friedman_p)
        << ",\n";
    out << "iman_davenport,," << fmt_double(report.iman_davenport_stat) << ','
        << fmt_double(report.iman_davenport_p) << ",\n";
    out << "control," << report.control << ",,,\n";
    for (const HolmRow& row : report.posthoc)
        out << "holm," << row.method << ',' << fmt_double(row.z) << ',' << fmt_double(row.p) << ','
            << fmt_double(row.adjusted) << '\n';
}

}  // namespace infmax

// evmtriage: opcode-frequency triage models for ERC-20 token contracts
// Copyright 2026 The evmtriage Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <evmtriage/error.hpp>
#include <evmtriage/features.hpp>
#include <evmtriage/standardize.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace evmtriage
{
namespace detail
{
/// Regularized incomplete beta function I_x(a, b) via the Lentz continued
/// fraction, accurate to better than 1e-8 relative error for the t-tail
/// arguments used here.
[[nodiscard]] inline double incomplete_beta(double a, double b, double x)
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;

    const auto log_prefactor = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x);

    // The continued fraction converges fastest for x < (a+1)/(a+b+2); use the
    // symmetry I_x(a,b) = 1 − I_{1−x}(b,a) otherwise.
    if (x >= (a + 1.0) / (a + b + 2.0))
        return 1.0 - incomplete_beta(b, a, 1.0 - x);

    constexpr double tiny = 1e-300;
    constexpr double epsilon = 1e-15;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double fraction = d;
    for (int m = 1; m <= 500; ++m)
    {
        const auto m_real = static_cast<double>(m);
        // Even step.
        double numerator =
            m_real * (b - m_real) * x / ((a + 2.0 * m_real - 1.0) * (a + 2.0 * m_real));
        d = 1.0 + numerator * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + numerator / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        fraction *= d * c;
        // Odd step.
        numerator = -(a + m_real) * (a + b + m_real) * x /
                    ((a + 2.0 * m_real) * (a + 2.0 * m_real + 1.0));
        d = 1.0 + numerator * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + numerator / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const auto delta = d * c;
        fraction *= delta;
        if (std::abs(delta - 1.0) < epsilon)
            break;
    }
    return std::exp(log_prefactor) * fraction / a;
}

struct SampleMoments
{
    size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< sample (n−1) variance
};

[[nodiscard]] inline SampleMoments moments(const std::vector<double>& sample)
{
    SampleMoments m;
    m.n = sample.size();
    if (m.n < 2)
        throw InsufficientDataError{"need at least 2 observations"};
    for (const auto value : sample)
    {
        if (!std::isfinite(value))
            throw InvalidDataError{"non-finite observation"};
        m.mean += value;
    }
    m.mean /= static_cast<double>(m.n);
    for (const auto value : sample)
        m.variance += (value - m.mean) * (value - m.mean);
    m.variance /= static_cast<double>(m.n - 1);
    return m;
}
}  // namespace detail

/// Two-sided p-value of a t statistic with the given degrees of freedom,
/// P(|T| ≥ |t|) = I_{ν/(ν+t²)}(ν/2, 1/2).
[[nodiscard]] inline double t_two_sided_p(double t, double degrees_of_freedom)
{
    if (degrees_of_freedom <= 0.0)
        throw InvalidDataError{"degrees of freedom must be positive"};
    if (t == 0.0)
        return 1.0;
    const auto x = degrees_of_freedom / (degrees_of_freedom + t * t);
    return std::clamp(detail::incomplete_beta(degrees_of_freedom / 2.0, 0.5, x), 0.0, 1.0);
}

struct TTestResult
{
    double t_value = 0.0;
    double p_value = 1.0;
    double degrees_of_freedom = 0.0;
};

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
/// freedom; two-sided p. Both samples need at least 2 finite observations.
[[nodiscard]] inline TTestResult welch_t_test(
    const std::vector<double>& sample_a, const std::vector<double>& sample_b)
{
    const auto a = detail::moments(sample_a);
    const auto b = detail::moments(sample_b);
    const auto var_a = a.variance / static_cast<double>(a.n);
    const auto var_b = b.variance / static_cast<double>(b.n);
    const auto denominator = std::sqrt(var_a + var_b);
    TTestResult result;
    if (denominator == 0.0)
    {
        // Zero variance in both samples: identical constant data ⇒ t = 0.
        if (a.mean != b.mean)
            throw InvalidDataError{"zero-variance samples with unequal means"};
        result.degrees_of_freedom = static_cast<double>(a.n + b.n - 2);
        return result;
    }
    result.t_value = (a.mean - b.mean) / denominator;
    result.degrees_of_freedom =
        (var_a + var_b) * (var_a + var_b) /
        (var_a * var_a / static_cast<double>(a.n - 1) +
            var_b * var_b / static_cast<double>(b.n - 1));
    result.p_value = t_two_sided_p(result.t_value, result.degrees_of_freedom);
    return result;
}

/// Student's pooled-variance t-test (equal variances assumed), the classical
/// two-sample test most reporting tools default to; degrees of freedom
/// n_a + n_b − 2. Used by the reporting paths so printed t-values follow the
/// pooled convention.
[[nodiscard]] inline TTestResult student_t_test(
    const std::vector<double>& sample_a, const std::vector<double>& sample_b)
{
    const auto a = detail::moments(sample_a);
    const auto b = detail::moments(sample_b);
    const auto df = static_cast<double>(a.n + b.n - 2);
    const auto pooled_variance = (static_cast<double>(a.n - 1) * a.variance +
                                     static_cast<double>(b.n - 1) * b.variance) /
                                 df;
    const auto denominator = std::sqrt(
        pooled_variance * (1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n)));
    TTestResult result;
    result.degrees_of_freedom = df;
    if (denominator == 0.0)
    {
        if (a.mean != b.mean)
            throw InvalidDataError{"zero-variance samples with unequal means"};
        return result;
    }
    result.t_value = (a.mean - b.mean) / denominator;
    result.p_value = t_two_sided_p(result.t_value, result.degrees_of_freedom);
    return result;
}

struct EffectSize
{
    double d = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Cohen's d with pooled (n−1) standard deviation and a 95% normal-
/// approximation confidence interval d ± 1.96·SE,
/// SE = sqrt((n_a+n_b)/(n_a·n_b) + d²/(2(n_a+n_b))).
[[nodiscard]] inline EffectSize cohens_d(
    const std::vector<double>& sample_a, const std::vector<double>& sample_b)
{
    const auto a = detail::moments(sample_a);
    const auto b = detail::moments(sample_b);
    const auto pooled_variance = (static_cast<double>(a.n - 1) * a.variance +
                                     static_cast<double>(b.n - 1) * b.variance) /
                                 static_cast<double>(a.n + b.n - 2);
    EffectSize effect;
    if (pooled_variance == 0.0)
    {
        if (a.mean != b.mean)
            throw UndefinedEffectError{"zero pooled variance with unequal means"};
        return effect;  // d = 0 with degenerate CI [0, 0]
    }
    effect.d = (a.mean - b.mean) / std::sqrt(pooled_variance);
    const auto n_a = static_cast<double>(a.n);
    const auto n_b = static_cast<double>(b.n);
    const auto standard_error =
        std::sqrt((n_a + n_b) / (n_a * n_b) + effect.d * effect.d / (2.0 * (n_a + n_b)));
    effect.ci_low = effect.d - 1.96 * standard_error;
    effect.ci_high = effect.d + 1.96 * standard_error;
    return effect;
}

/// Cosine similarity dot(u,v)/(‖u‖·‖v‖), clamped to [−1, 1] against rounding.
/// Zero vectors have no direction and raise an undefined-similarity error.
[[nodiscard]] inline double cosine(const std::vector<double>& u, const std::vector<double>& v)
{
    if (u.size() != v.size())
        throw ShapeError{"cosine requires equal-length vectors"};
    double dot = 0.0;
    double norm_u = 0.0;
    double norm_v = 0.0;
    for (size_t i = 0; i < u.size(); ++i)
    {
        dot += u[i] * v[i];
        norm_u += u[i] * u[i];
        norm_v += v[i] * v[i];
    }
    if (norm_u == 0.0 || norm_v == 0.0)
        throw UndefinedSimilarityError{"cosine of a zero vector is undefined"};
    return std::clamp(dot / (std::sqrt(norm_u) * std::sqrt(norm_v)), -1.0, 1.0);
}

/// Per-opcode two-class comparison: class means and (n−1) sds, pooled
/// two-sample t, and Cohen's d with its 95% CI. Sample a is the violation
/// class, sample b the legitimate class, so negative t/d means violations use
/// the opcode less.
struct MeanComparison
{
    std::string opcode;
    double mean_a = 0.0;  ///< violation class
    double sd_a = 0.0;
    double mean_b = 0.0;  ///< legitimate class
    double sd_b = 0.0;
    double t_value = 0.0;
    double p_value = 1.0;
    double cohens_d = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Builds one MeanComparison per requested opcode from the full (unbalanced)
/// corpus split by class. Requested opcodes must exist in the schema.
[[nodiscard]] inline std::vector<MeanComparison> opcode_mean_table(
    const FeatureMatrix& matrix, const std::vector<std::string>& opcodes)
{
    std::vector<MeanComparison> table;
    table.reserve(opcodes.size());
    for (const auto& opcode : opcodes)
    {
        const auto column = matrix.schema.index_of(opcode);
        if (column == FeatureSchema::npos)
            throw SchemaMismatchError{"schema mismatch: " + opcode};
        std::vector<double> violations;
        std::vector<double> legitimate;
        for (size_t i = 0; i < matrix.rows.size(); ++i)
            (matrix.labels[i] == Label::violation ? violations : legitimate)
                .push_back(static_cast<double>(matrix.rows[i].counts[column]));

        MeanComparison comparison;
        comparison.opcode = opcode;
        const auto a = detail::moments(violations);
        const auto b = detail::moments(legitimate);
        comparison.mean_a = a.mean;
        comparison.sd_a = std::sqrt(a.variance);
        comparison.mean_b = b.mean;
        comparison.sd_b = std::sqrt(b.variance);
        const auto test = student_t_test(violations, legitimate);
        comparison.t_value = test.t_value;
        comparison.p_value = test.p_value;
        const auto effect = cohens_d(violations, legitimate);
        comparison.cohens_d = effect.d;
        comparison.ci_low = effect.ci_low;
        comparison.ci_high = effect.ci_high;
        table.push_back(comparison);
    }
    return table;
}

/// Summary of one set of pairwise similarities.
struct SimilaritySample
{
    size_t pair_count = 0;
    double mean = 0.0;
    double sd = 0.0;  ///< sample (n−1) sd over pairs
};

/// Named t-test between two similarity samples (descriptive: pairs sharing a
/// row are not independent observations, so p-values characterize magnitude,
/// not inference). Tiny corpora can make a comparison undefined — fewer than
/// two pairs on a side, or zero variance with unequal means — in which case
/// defined stays false and t/p hold their defaults.
struct SimilarityComparison
{
    std::string name;
    double t_value = 0.0;
    double p_value = 1.0;
    bool defined = false;
};

struct SimilarityReport
{
    SimilaritySample within_violation;
    SimilaritySample within_legitimate;
    SimilaritySample inter_class;
    std::vector<SimilarityComparison> comparisons;
    size_t skipped_rows = 0;  ///< zero-norm rows excluded from every pairing
};

/// Pairwise cosine-similarity structure of the corpus: every unordered
/// within-class pair and every cross-class pair, evaluated on standardized
/// rows (zero-variance columns dropped). Raw ERC-20 count vectors share so
/// much compiler boilerplate that their cosines crowd toward 1; standardizing
/// first measures how contracts differ from the corpus norm, which is the
/// contrast of interest. Rows with zero norm after standardization are
/// skipped and counted.
[[nodiscard]] inline SimilarityReport class_similarity(const FeatureMatrix& matrix)
{
    if (matrix.count(Label::violation) < 2 || matrix.count(Label::legitimate) < 2)
        throw InsufficientDataError{"class_similarity requires 2+ rows per class"};

    const auto standardization = fit_standardization(matrix);
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    rows.reserve(matrix.rows.size());
    SimilarityReport report;
    for (size_t i = 0; i < matrix.rows.size(); ++i)
    {
        auto row = standardization.apply_row(matrix.rows[i].counts);
        double norm = 0.0;
        for (const auto value : row)
            norm += value * value;
        if (norm == 0.0)
        {
            ++report.skipped_rows;
            continue;
        }
        rows.push_back(std::move(row));
        labels.push_back(matrix.labels[i]);
    }

    std::vector<double> within_violation;
    std::vector<double> within_legitimate;
    std::vector<double> inter_class;
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = i + 1; j < rows.size(); ++j)
        {
            const auto similarity = cosine(rows[i], rows[j]);
            if (labels[i] != labels[j])
                inter_class.push_back(similarity);
            else if (labels[i] == Label::violation)
                within_violation.push_back(similarity);
            else
                within_legitimate.push_back(similarity);
        }

    // A set with a single pair still has a well-defined mean; its sd is
    // reported as 0 rather than raising, so the smallest admissible corpora
    // (two rows per class) produce a complete report.
    const auto summarize = [](const std::vector<double>& sample) {
        SimilaritySample summary;
        summary.pair_count = sample.size();
        if (sample.empty())
            return summary;
        for (const auto value : sample)
            summary.mean += value;
        summary.mean /= static_cast<double>(sample.size());
        if (sample.size() >= 2)
        {
            const auto m = detail::moments(sample);
            summary.sd = std::sqrt(m.variance);
        }
        return summary;
    };
    report.within_violation = summarize(within_violation);
    report.within_legitimate = summarize(within_legitimate);
    report.inter_class = summarize(inter_class);

    const auto compare = [](std::string name, const std::vector<double>& a,
                             const std::vector<double>& b) {
        SimilarityComparison comparison;
        comparison.name = std::move(name);
        try
        {
            const auto test = student_t_test(a, b);
            comparison.t_value = test.t_value;
            comparison.p_value = test.p_value;
            comparison.defined = true;
        }
        catch (const InsufficientDataError&)
        {}
        catch (const InvalidDataError&)
        {}
        return comparison;
    };
    report.comparisons.push_back(
        compare("violation-vs-inter", within_violation, inter_class));
    report.comparisons.push_back(
        compare("legitimate-vs-inter", within_legitimate, inter_class));
    report.comparisons.push_back(
        compare("violation-vs-legitimate", within_violation, within_legitimate));
    return report;
}
}  // namespace evmtriage

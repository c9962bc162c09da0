#include "vnrf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vnrf {

PlotKind parse_plot_kind(const std::string& text) {
    if (text == "phase_diagram") return PlotKind::PhaseDiagram;
    if (text == "context_size_histogram") return PlotKind::ContextSizeHistogram;
    if (text == "lemma1_comparison") return PlotKind::Lemma1Comparison;
    if (text == "scaling") return PlotKind::Scaling;
    throw std::invalid_argument("unknown plot kind '" + text +
                                "' (expected phase_diagram, context_size_histogram, lemma1_comparison or scaling)");
}

std::string to_string(PlotKind kind) {
    switch (kind) {
    case PlotKind::PhaseDiagram: return "phase_diagram";
    case PlotKind::ContextSizeHistogram: return "context_size_histogram";
    case PlotKind::Lemma1Comparison: return "lemma1_comparison";
    case PlotKind::Scaling: return "scaling";
    }
    return "unknown";
}

namespace {

constexpr int kCurvePoints = 51;
const std::string kNA = "NA";

std::vector<const SweepResult*> sorted_rows(const std::vector<SweepResult>& results) {
    std::vector<const SweepResult*> rows;
    for (const auto& r : results) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](const SweepResult* a, const SweepResult* b) {
        return a->cell.cell_index < b->cell.cell_index;
    });
    return rows;
}

std::string cell_columns(const SweepPoint& c) {
    return format_number(c.beta) + ',' + format_number(c.epsilon) + ',' + to_string(c.boundary) + ',' +
           std::to_string(c.size);
}

// Smallest beta with 2 beta > ln 3 + e^{-beta}, by bisection on the
// increasing function 2 beta - ln 3 - e^{-beta}.
double proof_beta_threshold() {
    double lo = 0.0;
    double hi = 2.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (2.0 * mid - std::log(3.0) - std::exp(-mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

void phase_diagram(std::ostream& out, const std::vector<const SweepResult*>& rows) {
    out << "series,beta,epsilon,boundary,size,spanning_prob,spanning_stderr,truncated_fraction,"
           "truncated_stderr,thm2_finite,thm2_infinite,thm3_stated,thm3_proof_region\n";
    double beta_max = 3.0;
    for (const auto* r : rows) {
        const TheoryFlags& t = r->theory;
        beta_max = std::max(beta_max, r->cell.beta);
        out << "measured," << cell_columns(r->cell) << ',' << format_number(r->spanning.value) << ','
            << format_number(r->spanning.stderr_) << ',' << format_number(r->truncated_fraction.value) << ','
            << format_number(r->truncated_fraction.stderr_) << ',' << (t.thm2_finite ? 1 : 0) << ','
            << (t.thm2_infinite ? 1 : 0) << ',' << (t.thm3_stated ? 1 : 0) << ','
            << (t.thm3_proof_region ? 1 : 0) << '\n';
    }

    const Thresholds th = rows.front()->thresholds;
    auto curve_row = [&](const char* series, double beta, double eps) {
        out << series << ',' << format_number(beta) << ',' << format_number(eps)
            << ",NA,NA,NA,NA,NA,NA,NA,NA,NA,NA\n";
    };

    // beta(eps) below which every context is finite, for eps in [0, 2 p* - 1].
    const double eps_end = 2.0 * th.p_star - 1.0;
    for (int k = 0; k < kCurvePoints; ++k) {
        const double eps = eps_end * k / (kCurvePoints - 1);
        if (const auto b = remark_beta_bound(eps, th)) curve_row("remark_curve", *b, eps);
    }
    // eps(beta) = 1/3 - e^{-2 beta} from the stated and the proof thresholds on beta.
    const double stated_start = 0.5 * std::log(3.0);
    const double proof_start = proof_beta_threshold();
    for (int k = 0; k < kCurvePoints; ++k) {
        const double beta = stated_start + (beta_max - stated_start) * k / (kCurvePoints - 1);
        curve_row("thm3_stated_curve", beta, thm3_epsilon_bound(beta));
    }
    for (int k = 0; k < kCurvePoints; ++k) {
        const double beta = proof_start + (beta_max - proof_start) * k / (kCurvePoints - 1);
        curve_row("thm3_proof_curve", beta, thm3_epsilon_bound(beta));
    }
    curve_row("beta_c", th.beta_c, 0.0);
    curve_row("beta_c", th.beta_c, 1.0);
}

void context_histogram(std::ostream& out, const std::vector<const SweepResult*>& rows) {
    out << "series,beta,epsilon,boundary,size,context_size,count,fraction\n";
    for (const auto* r : rows) {
        for (const auto& [size, count] : r->context_size_histogram) {
            out << "measured," << cell_columns(r->cell) << ',' << size << ',' << count << ','
                << format_number(static_cast<double>(count) / static_cast<double>(r->resolved_contexts)) << '\n';
        }
    }
}

void lemma1_comparison(std::ostream& out, const std::vector<const SweepResult*>& rows) {
    out << "series,beta,epsilon,boundary,size,length,value,stderr\n";
    for (const auto* r : rows) {
        const std::string cell = cell_columns(r->cell);
        for (const PathLengthStats& p : r->paths) {
            const std::string head = cell + ',' + std::to_string(p.length) + ',';
            out << "max_path_freq," << head << format_number(p.max_path_freq.value) << ','
                << format_number(p.max_path_freq.stderr_) << '\n';
            out << "mean_path_freq," << head << format_number(p.mean_path_freq) << ",NA\n";
            out << "lemma1_bound," << head << format_number(p.lemma1_bound) << ",NA\n";
            out << "open_path_prob," << head << format_number(p.open_path_prob.value) << ','
                << format_number(p.open_path_prob.stderr_) << '\n';
            out << "open_path_bound," << head << format_number(p.open_path_bound) << ",NA\n";
        }
    }
}

void scaling(std::ostream& out, std::vector<const SweepResult*> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepResult* a, const SweepResult* b) {
        const auto ka = std::make_tuple(a->cell.beta, a->cell.epsilon, static_cast<int>(a->cell.boundary), a->cell.size);
        const auto kb = std::make_tuple(b->cell.beta, b->cell.epsilon, static_cast<int>(b->cell.boundary), b->cell.size);
        return ka < kb;
    });
    out << "series,beta,epsilon,boundary,size,value,stderr\n";
    for (const auto* r : rows) {
        const std::string cell = cell_columns(r->cell);
        out << "truncated_fraction," << cell << ',' << format_number(r->truncated_fraction.value) << ','
            << format_number(r->truncated_fraction.stderr_) << '\n';
        out << "spanning_prob," << cell << ',' << format_number(r->spanning.value) << ','
            << format_number(r->spanning.stderr_) << '\n';
        out << "mean_context_size," << cell << ',' << format_number(r->mean_context_size) << ",NA\n";
    }
}

} // namespace

std::string plot_table(const std::vector<SweepResult>& results, PlotKind kind) {
    if (results.empty()) throw std::invalid_argument("no results to tabulate");
    const auto rows = sorted_rows(results);
    std::ostringstream out;
    switch (kind) {
    case PlotKind::PhaseDiagram: phase_diagram(out, rows); break;
    case PlotKind::ContextSizeHistogram: context_histogram(out, rows); break;
    case PlotKind::Lemma1Comparison: lemma1_comparison(out, rows); break;
    case PlotKind::Scaling: scaling(out, rows); break;
    }
    return out.str();
}

std::filesystem::path emit_plot_data(const std::vector<SweepResult>& results, PlotKind kind,
                                     const std::filesystem::path& dir) {
    const std::string table = plot_table(results, kind);
    const std::filesystem::path plots = dir / "plots";
    std::error_code ec;
    std::filesystem::create_directories(plots, ec);
    if (ec) throw std::runtime_error("cannot create " + plots.string() + ": " + ec.message());
    const std::filesystem::path file = plots / (to_string(kind) + ".csv");
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << table;
    if (!out) throw std::runtime_error("write failed for " + file.string());
    return file;
}

} // namespace vnrf

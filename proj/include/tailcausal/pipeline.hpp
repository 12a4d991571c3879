#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailcausal/csv.hpp"
#include "tailcausal/errors.hpp"
#include "tailcausal/inference.hpp"
#include "tailcausal/margins.hpp"
#include "tailcausal/matrix.hpp"
#include "tailcausal/score.hpp"
#include "tailcausal/window.hpp"

namespace tailcausal {

inline constexpr int kReportSchemaVersion = 1;

struct PipelineConfig {
  std::string input_path;
  std::string output_path;      // JSON report
  std::string output_csv_path;  // flat pairwise CSV; derived from output_path if empty
  std::string group_column;     // optional
  std::string time_column;      // optional
  WindowConfig window{1, 1, {}};
  ThresholdSpec threshold = ThresholdSpec::at_quantile(0.90);
  TransformMethod transform = TransformMethod::rank;
  std::vector<std::string> zero_filter_columns;  // drop rows where ALL of these are zero
  BootstrapConfig bootstrap;
  double score_floor = 0.01;

  std::string flat_csv_path() const {
    if (!output_csv_path.empty()) return output_csv_path;
    const std::size_t dot = output_path.rfind('.');
    const std::string stem =
        (dot == std::string::npos) ? output_path : output_path.substr(0, dot);
    return stem + ".pairs.csv";
  }
};

/// One row of the flat pairwise-results table.
struct PairRow {
  std::string group;
  std::string cause;
  std::string effect;
  double score;
  double ci_lo;
  double ci_hi;
  bool significant;
  double w1_cause;
  double w1_effect;
  std::size_t n_events;
};

namespace detail {

/// Per-group preprocessing: drop all-zero filter columns entirely (noting
/// the exclusion), then remove rows where every remaining filter column is
/// zero.
struct ZeroFilterResult {
  SampleMatrix data;
  std::vector<std::string> excluded_columns;
  std::size_t dropped_rows = 0;
};

inline ZeroFilterResult apply_zero_filter(const SampleMatrix& data,
                                          const std::vector<std::string>& columns) {
  ZeroFilterResult out;
  if (columns.empty()) {
    out.data = data;
    return out;
  }
  std::vector<std::size_t> filter_idx;
  for (const std::string& name : columns) {
    bool found = false;
    for (std::size_t j = 0; j < data.cols(); ++j)
      if (data.column_names()[j] == name) {
        filter_idx.push_back(j);
        found = true;
        break;
      }
    if (!found)
      throw ParameterError("zero-filter column '" + name + "' not in input");
  }

  std::vector<bool> column_all_zero;
  std::vector<std::size_t> active_filters;
  for (std::size_t j : filter_idx) {
    bool all_zero = true;
    for (std::size_t i = 0; i < data.rows() && all_zero; ++i)
      all_zero = (data(i, j) == 0.0);
    if (all_zero)
      out.excluded_columns.push_back(data.column_names()[j]);
    else
      active_filters.push_back(j);
  }

  std::vector<std::size_t> keep_cols;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    bool excluded = false;
    for (const std::string& name : out.excluded_columns)
      if (data.column_names()[j] == name) excluded = true;
    if (!excluded) keep_cols.push_back(j);
  }

  std::vector<std::size_t> keep_rows;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    bool all_zero = !active_filters.empty();
    for (std::size_t j : active_filters)
      if (data(i, j) != 0.0) {
        all_zero = false;
        break;
      }
    if (!all_zero) keep_rows.push_back(i);
  }
  out.dropped_rows = data.rows() - keep_rows.size();

  SampleMatrix filtered(keep_rows.size(), keep_cols.size());
  std::vector<std::string> names;
  for (std::size_t j : keep_cols) names.push_back(data.column_names()[j]);
  if (!keep_rows.empty()) filtered.set_column_names(names);
  for (std::size_t r = 0; r < keep_rows.size(); ++r)
    for (std::size_t c = 0; c < keep_cols.size(); ++c)
      filtered(r, c) = data(keep_rows[r], keep_cols[c]);
  if (keep_rows.empty())
    filtered = SampleMatrix(0, keep_cols.size(), {}, names);
  out.data = std::move(filtered);
  return out;
}

inline nlohmann::json ci_to_json(const ScoreCI& ci) {
  return {{"point", ci.point},
          {"lo", ci.lo},
          {"hi", ci.hi},
          {"significant", ci.significant}};
}

}  // namespace detail

/// Score one prepared matrix: event selection, transform, pairwise scores,
/// bootstrap CIs, and the source-node vote. Shared by the pipeline and the
/// score/source-node CLI commands.
struct GroupAnalysis {
  nlohmann::json report;
  std::vector<PairRow> pairs;
};

inline GroupAnalysis analyze_group(const std::string& group_label,
                                   const SampleMatrix& data,
                                   const PipelineConfig& cfg,
                                   bool with_bootstrap = true) {
  GroupAnalysis out;
  nlohmann::json& g = out.report;
  g["group"] = group_label;
  g["error"] = nullptr;

  const detail::ZeroFilterResult filtered =
      detail::apply_zero_filter(data, cfg.zero_filter_columns);
  g["excluded_columns"] = filtered.excluded_columns;
  g["rows_dropped_by_zero_filter"] = filtered.dropped_rows;
  if (!filtered.excluded_columns.empty()) {
    std::string note = "excluded all-zero column(s) from analysis:";
    for (const std::string& c : filtered.excluded_columns) note += " " + c;
    g["notes"].push_back(note);
  }

  const SampleMatrix& m = filtered.data;
  m.require_valid(2);
  g["columns"] = m.column_names();
  g["n_rows"] = m.rows();

  const TransformResult t = to_standard_pareto(m, cfg.threshold, cfg.transform);
  g["n_events"] = t.x.values.rows();
  g["thresholds"] = derive_thresholds(m, cfg.threshold);
  g["warnings"] = t.warnings;
  if (!t.fits.empty()) {
    nlohmann::json fits = nlohmann::json::array();
    for (const GpMarginFit& f : t.fits)
      fits.push_back({{"sigma", f.sigma},
                      {"xi", f.xi},
                      {"threshold", f.threshold},
                      {"n_exceed", f.n_exceed},
                      {"log_likelihood", f.log_likelihood},
                      {"reliable", f.reliable}});
    g["fits"] = fits;
  }

  const CausalScoreReport rep = score_report(t.x, cfg.score_floor);
  g["w1"] = rep.w1.distances;
  g["scores"] = rep.scores;
  g["topological_order"] = rep.topological_order;
  g["source_node"] = rep.source_node;
  g["source_tie"] = rep.source_tie;
  g["non_identifiable"] = rep.non_identifiable;

  std::vector<std::vector<ScoreCI>> cis;
  if (with_bootstrap) {
    cis = bootstrap_scores(t.x, cfg.bootstrap);
    nlohmann::json jci = nlohmann::json::array();
    for (std::size_t i = 0; i < cis.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < cis.size(); ++j)
        row.push_back(i == j ? nlohmann::json(nullptr)
                             : detail::ci_to_json(cis[i][j]));
      jci.push_back(row);
    }
    g["score_ci"] = jci;

    const SourceVote vote = source_node_vote(t.x, cfg.bootstrap);
    g["source_vote"] = {
        {"has_winner", vote.has_winner},
        {"winner", vote.has_winner ? nlohmann::json(vote.winner) : nlohmann::json(nullptr)},
        {"winner_name", vote.has_winner ? nlohmann::json(m.column_names()[vote.winner])
                                        : nlohmann::json(nullptr)},
        {"vote_fractions", vote.vote_fractions}};
  }

  const std::size_t d = m.cols();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      PairRow row;
      row.group = group_label;
      row.cause = m.column_names()[i];
      row.effect = m.column_names()[j];
      row.score = rep.scores[i][j];
      row.ci_lo = with_bootstrap ? cis[i][j].lo : rep.scores[i][j];
      row.ci_hi = with_bootstrap ? cis[i][j].hi : rep.scores[i][j];
      row.significant = with_bootstrap && cis[i][j].significant;
      row.w1_cause = rep.w1.distances[i];
      row.w1_effect = rep.w1.distances[j];
      row.n_events = t.x.values.rows();
      out.pairs.push_back(row);
    }
  return out;
}

inline void write_pairs_csv(const std::string& path,
                            const std::vector<PairRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write to '" + path + "'");
  out << "group,cause,effect,score,ci_lo,ci_hi,significant,w1_cause,w1_effect,n_events\n";
  for (const PairRow& r : rows) {
    out << r.group << ',' << r.cause << ',' << r.effect << ','
        << format_double(r.score) << ',' << format_double(r.ci_lo) << ','
        << format_double(r.ci_hi) << ',' << (r.significant ? 1 : 0) << ','
        << format_double(r.w1_cause) << ',' << format_double(r.w1_effect) << ','
        << r.n_events << '\n';
  }
}

inline nlohmann::json pipeline_config_json(const PipelineConfig& cfg) {
  return {{"input", cfg.input_path},
          {"group_column", cfg.group_column},
          {"window_length", cfg.window.length},
          {"window_stride", cfg.window.stride},
          {"threshold_q", cfg.threshold.quantile_level},
          {"transform", transform_method_name(cfg.transform)},
          {"zero_filter_columns", cfg.zero_filter_columns},
          {"bootstrap",
           {{"replicates", cfg.bootstrap.replicates},
            {"ci_level", cfg.bootstrap.ci_level},
            {"vote_threshold", cfg.bootstrap.vote_threshold},
            {"seed", cfg.bootstrap.seed},
            {"method", "percentile"}}},
          {"score_floor", cfg.score_floor},
          {"source_convention", "largest W1 distance to Exp(1) is the source"}};
}

/// Full end-user pipeline: ingest, per-group windowing + zero filtering +
/// scoring + bootstrap, JSON report, flat pairwise CSV. Failing groups get
/// an error entry and the run continues.
inline nlohmann::json run_pipeline(const PipelineConfig& cfg) {
  const IngestResult in =
      ingest_csv(cfg.input_path, {cfg.group_column, cfg.time_column});
  const std::map<std::string, SampleMatrix> groups = split_by_group(in);

  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["config"] = pipeline_config_json(cfg);
  report["groups"] = nlohmann::json::array();

  std::vector<PairRow> all_pairs;
  for (const auto& [label, raw] : groups) {
    try {
      SampleMatrix prepared =
          (cfg.window.length > 1) ? apply_windows(raw, cfg.window) : raw;
      GroupAnalysis a = analyze_group(label, prepared, cfg);
      a.report["n_rows_raw"] = raw.rows();
      report["groups"].push_back(std::move(a.report));
      all_pairs.insert(all_pairs.end(), a.pairs.begin(), a.pairs.end());
    } catch (const Error& e) {
      report["groups"].push_back(
          {{"group", label}, {"error", e.what()}, {"n_rows_raw", raw.rows()}});
    }
  }

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw DataError("cannot write to '" + cfg.output_path + "'");
    out << report.dump(2) << '\n';
    write_pairs_csv(cfg.flat_csv_path(), all_pairs);
  }
  return report;
}

}  // namespace tailcausal

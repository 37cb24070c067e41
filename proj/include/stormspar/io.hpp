#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "stormspar/experiments.hpp"

namespace stormspar {

enum class OutputFormat { csv, json };

const char* to_string(TrialTermination termination);
const char* to_string(ExperimentKind kind);
const char* to_string(MRule rule);
ExperimentKind experiment_kind_from_string(const std::string& name);
MRule m_rule_from_string(const std::string& name);
OutputFormat output_format_from_string(const std::string& name);

// One row per trial. Header row, comma separated, newline terminated;
// relative errors in scientific notation, rates as 0.xx.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);

// One row per aggregate group. The aver_iter column is floored for display
// only; the stored aggregates keep the exact mean. phase_transition adds a
// factor column, noise_sweep an snr_db column.
void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                          ExperimentKind kind);

// Two-column (x, y) series, plot-ready.
void write_series_csv(std::ostream& out, const std::string& x_label, const std::string& y_label,
                      const std::vector<std::pair<double, double>>& points);

// JSON mirrors of the record and aggregate lists. Non-finite values are
// emitted as null so the documents round-trip.
nlohmann::json records_to_json(const std::vector<TrialRecord>& records);
nlohmann::json aggregates_to_json(const std::vector<AggregateRow>& rows);

// ExperimentSpec <-> JSON, field for field. Unknown keys are rejected.
// apply_spec_json overwrites only the fields present in the document, so a
// partial config keeps the caller's defaults.
nlohmann::json spec_to_json(const ExperimentSpec& spec);
void apply_spec_json(ExperimentSpec& spec, const nlohmann::json& doc);
ExperimentSpec spec_from_json(const nlohmann::json& doc);
ExperimentSpec load_spec_file(const std::string& path);

}  // namespace stormspar

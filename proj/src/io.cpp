#include "stormspar/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stormspar {

namespace {

std::string fmt(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), format, value);
    return buffer;
}

nlohmann::json json_number(double value) {
    if (!std::isfinite(value)) {
        return nullptr;
    }
    return value;
}

}  // namespace

const char* to_string(TrialTermination termination) {
    switch (termination) {
        case TrialTermination::converged: return "converged";
        case TrialTermination::max_iters: return "max_iters";
        case TrialTermination::skipped: return "skipped";
    }
    return "unknown";
}

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::phase_transition: return "phase_transition";
        case ExperimentKind::noise_sweep: return "noise_sweep";
        case ExperimentKind::dimension_table: return "dimension_table";
        case ExperimentKind::sparsity_table: return "sparsity_table";
        case ExperimentKind::single: return "single";
    }
    return "unknown";
}

const char* to_string(MRule rule) {
    return rule == MRule::explicit_list ? "explicit_list" : "factor_times_k";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "phase_transition") return ExperimentKind::phase_transition;
    if (name == "noise_sweep") return ExperimentKind::noise_sweep;
    if (name == "dimension_table") return ExperimentKind::dimension_table;
    if (name == "sparsity_table") return ExperimentKind::sparsity_table;
    if (name == "single") return ExperimentKind::single;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

MRule m_rule_from_string(const std::string& name) {
    if (name == "explicit_list") return MRule::explicit_list;
    if (name == "factor_times_k") return MRule::factor_times_k;
    throw std::invalid_argument("unknown m_rule: " + name);
}

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format: " + name);
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "n,s,m,factor,sigma,trial_index,seed,success,rel_error,snr_db,"
           "outer_iters,termination,wall_time_s\n";
    for (const TrialRecord& r : records) {
        out << r.n << ',' << r.s << ',' << r.m << ',' << fmt("%g", r.factor) << ','
            << fmt("%g", r.sigma) << ',' << r.trial_index << ',' << r.seed << ','
            << (r.success ? 1 : 0) << ',' << fmt("%.6e", r.rel_error) << ','
            << fmt("%.4f", r.snr_db) << ',' << r.outer_iters << ','
            << to_string(r.termination) << ',' << fmt("%.6f", r.wall_time) << '\n';
    }
}

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                          ExperimentKind kind) {
    const bool with_factor = kind == ExperimentKind::phase_transition;
    const bool with_snr = kind == ExperimentKind::noise_sweep;
    out << "n,s,m";
    if (with_factor) out << ",factor";
    out << ",sigma";
    if (with_snr) out << ",snr_db";
    out << ",trial_count,success_rate,aver_iter,mean_rel_error\n";
    for (const AggregateRow& row : rows) {
        out << row.n << ',' << row.s << ',' << row.m;
        if (with_factor) out << ',' << fmt("%g", row.factor);
        out << ',' << fmt("%g", row.sigma);
        if (with_snr) out << ',' << fmt("%.2f", row.mean_snr_db);
        out << ',' << row.trial_count << ',' << fmt("%.2f", row.success_rate) << ','
            << static_cast<long long>(std::floor(row.mean_outer_iters)) << ','
            << fmt("%.6e", row.mean_rel_error) << '\n';
    }
}

void write_series_csv(std::ostream& out, const std::string& x_label, const std::string& y_label,
                      const std::vector<std::pair<double, double>>& points) {
    out << x_label << ',' << y_label << '\n';
    for (const auto& [x, y] : points) {
        out << fmt("%g", x) << ',' << fmt("%.6e", y) << '\n';
    }
}

nlohmann::json records_to_json(const std::vector<TrialRecord>& records) {
    nlohmann::json doc = nlohmann::json::array();
    for (const TrialRecord& r : records) {
        doc.push_back({{"n", r.n},
                       {"s", r.s},
                       {"m", r.m},
                       {"factor", r.factor},
                       {"sigma", r.sigma},
                       {"trial_index", r.trial_index},
                       {"seed", r.seed},
                       {"success", r.success},
                       {"rel_error", json_number(r.rel_error)},
                       {"snr_db", json_number(r.snr_db)},
                       {"outer_iters", r.outer_iters},
                       {"termination", to_string(r.termination)},
                       {"wall_time_s", r.wall_time}});
    }
    return doc;
}

nlohmann::json aggregates_to_json(const std::vector<AggregateRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (const AggregateRow& row : rows) {
        doc.push_back({{"n", row.n},
                       {"s", row.s},
                       {"m", row.m},
                       {"factor", row.factor},
                       {"sigma", row.sigma},
                       {"trial_count", row.trial_count},
                       {"success_rate", row.success_rate},
                       {"mean_rel_error", row.mean_rel_error},
                       {"mean_outer_iters", row.mean_outer_iters},
                       {"mean_snr_db", json_number(row.mean_snr_db)}});
    }
    return doc;
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    return {{"kind", to_string(spec.kind)},
            {"n_values", spec.n_values},
            {"s_values", spec.s_values},
            {"m_rule", to_string(spec.m_rule)},
            {"m_values", spec.m_values},
            {"sample_factors", spec.sample_factors},
            {"sigma_values", spec.sigma_values},
            {"trials", spec.trials},
            {"base_seed", spec.base_seed},
            {"success_tol", spec.success_tol},
            {"gamma", spec.gamma},
            {"delta", spec.delta},
            {"max_outer_iters", spec.max_outer_iters},
            {"htp",
             {{"step_size", spec.htp.step_size},
              {"max_inner_iters", spec.htp.max_inner_iters},
              {"support_stall_stop", spec.htp.support_stall_stop},
              {"adaptive_step", spec.htp.adaptive_step}}}};
}

void apply_spec_json(ExperimentSpec& spec, const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw std::invalid_argument("experiment spec must be a JSON object");
    }
    static const char* known_keys[] = {"kind",          "n_values",   "s_values",
                                       "m_rule",        "m_values",   "sample_factors",
                                       "sigma_values",  "trials",     "base_seed",
                                       "success_tol",   "gamma",      "delta",
                                       "max_outer_iters", "htp"};
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* candidate : known_keys) {
            if (key == candidate) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument("unknown key in experiment spec: " + key);
        }
    }
    if (doc.contains("kind")) spec.kind = experiment_kind_from_string(doc["kind"]);
    if (doc.contains("n_values")) spec.n_values = doc["n_values"].get<std::vector<Eigen::Index>>();
    if (doc.contains("s_values")) spec.s_values = doc["s_values"].get<std::vector<Eigen::Index>>();
    if (doc.contains("m_rule")) spec.m_rule = m_rule_from_string(doc["m_rule"]);
    if (doc.contains("m_values")) spec.m_values = doc["m_values"].get<std::vector<Eigen::Index>>();
    if (doc.contains("sample_factors"))
        spec.sample_factors = doc["sample_factors"].get<std::vector<double>>();
    if (doc.contains("sigma_values"))
        spec.sigma_values = doc["sigma_values"].get<std::vector<double>>();
    if (doc.contains("trials")) spec.trials = doc["trials"].get<int>();
    if (doc.contains("base_seed")) spec.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("success_tol")) spec.success_tol = doc["success_tol"].get<double>();
    if (doc.contains("gamma")) spec.gamma = doc["gamma"].get<double>();
    if (doc.contains("delta")) spec.delta = doc["delta"].get<double>();
    if (doc.contains("max_outer_iters")) spec.max_outer_iters = doc["max_outer_iters"].get<int>();
    if (doc.contains("htp")) {
        const nlohmann::json& htp = doc["htp"];
        if (htp.contains("step_size")) spec.htp.step_size = htp["step_size"].get<double>();
        if (htp.contains("max_inner_iters"))
            spec.htp.max_inner_iters = htp["max_inner_iters"].get<int>();
        if (htp.contains("support_stall_stop"))
            spec.htp.support_stall_stop = htp["support_stall_stop"].get<bool>();
        if (htp.contains("adaptive_step"))
            spec.htp.adaptive_step = htp["adaptive_step"].get<bool>();
    }
}

ExperimentSpec spec_from_json(const nlohmann::json& doc) {
    ExperimentSpec spec;
    apply_spec_json(spec, doc);
    return spec;
}

ExperimentSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& error) {
        throw std::runtime_error("cannot parse config file " + path + ": " + error.what());
    }
    return spec_from_json(doc);
}

}  // namespace stormspar

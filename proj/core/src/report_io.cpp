#include "dscert/report_io.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"
#include "dscert/version.hpp"

namespace dscert {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

void append_double(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

ordered_json scan_points(const std::vector<ThresholdScanPoint>& pts) {
  ordered_json arr = ordered_json::array();
  for (const ThresholdScanPoint& p : pts) {
    ordered_json row;
    row["beta"] = p.beta;
    row["sum_k"] = p.coefficient_sum;
    row["holds"] = p.holds;
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

std::string certificate_to_json(const CertificateReport& r, bool with_timing) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = "certificate";
  j["geometry"] = r.geometry_id;
  j["beta"] = r.beta;
  j["mode"] = r.mode;
  j["symmetry"] = r.symmetry;
  j["certifying"] = r.certifying;
  j["epsilon_guard"] = r.epsilon_guard;
  j["volume"] = r.volume;
  const int nb = static_cast<int>(r.coefficients.size());
  ordered_json coeffs = ordered_json::array();
  for (const DependenceCoefficient& c : r.coefficients) {
    ordered_json row;
    row["site"] = c.boundary_site;
    row["k"] = c.value;
    row["method"] = c.method;
    row["argmax_boundary"] = c.argmax_boundary.to_string(nb);
    row["evaluated_patterns"] = c.evaluated_patterns;
    row["raw_patterns"] = c.raw_patterns;
    coeffs.push_back(std::move(row));
  }
  j["coefficients"] = std::move(coeffs);
  j["sum_k"] = r.coefficient_sum;
  j["verdict"] = r.holds ? "holds" : "fails";
  j["enumeration"] = {{"evaluated", r.enumeration.evaluated},
                      {"skipped_by_symmetry", r.enumeration.skipped_by_symmetry},
                      {"raw_total", r.enumeration.raw_total}};
  if (with_timing) j["timing"] = {{"wall_seconds", r.wall_seconds}};
  return j.dump(2);
}

std::string bisection_to_json(const BisectionResult& r, bool with_timing) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = "threshold";
  j["geometry"] = r.geometry_id;
  j["tolerance"] = r.tolerance;
  j["beta_max"] = r.beta_max;
  j["unbounded"] = r.unbounded;
  j["ambiguous"] = r.ambiguous;
  j["grid_monotone"] = r.grid_monotone;
  j["beta_lo"] = number_or_null(r.beta_lo);
  j["beta_hi"] = number_or_null(r.beta_hi);
  j["sum_at_lo"] = number_or_null(r.sum_at_lo);
  j["sum_at_hi"] = number_or_null(r.sum_at_hi);
  j["second_bracket_lo"] = number_or_null(r.second_bracket_lo);
  j["second_bracket_hi"] = number_or_null(r.second_bracket_hi);
  j["grid"] = scan_points(r.grid);
  j["iterations"] = scan_points(r.iterations);
  if (with_timing)
    j["timing"] = {{"wall_seconds", r.wall_seconds},
                   {"phases", {{"grid_seconds", r.grid_seconds},
                               {"bisect_seconds", r.bisect_seconds}}}};
  return j.dump(2);
}

std::string bisection_grid_csv(const BisectionResult& r, int volume) {
  std::string out = "beta,sum_k,volume,holds\n";
  for (const ThresholdScanPoint& p : r.grid) {
    append_double(out, p.beta);
    out.push_back(',');
    append_double(out, p.coefficient_sum);
    out.push_back(',');
    out += std::to_string(volume);
    out.push_back(',');
    out += p.holds ? "1" : "0";
    out.push_back('\n');
  }
  return out;
}

std::string dss_report_to_json(const DssSweepReport& r, bool with_timing) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = "dss";
  j["seed"] = r.config.seed;
  j["trials"] = r.config.trials;
  j["max_extent"] = r.config.max_extent;
  j["zero_field"] = r.config.zero_field;
  j["violation_threshold"] = r.config.violation_threshold;
  j["min_margin"] = r.min_margin;
  j["violation_count"] = r.violation_count;
  j["u_equals_v_count"] = r.u_equals_v_count;
  j["min_margin_u_equals_v"] = r.min_margin_u_equals_v;
  ordered_json trials = ordered_json::array();
  for (const DssTrial& t : r.trials) {
    ordered_json row;
    row["index"] = t.index;
    row["box"] = std::to_string(t.width) + "x" + std::to_string(t.height);
    row["beta"] = t.beta;
    row["h"] = t.field;
    row["u"] = t.u;
    row["v"] = t.v;
    row["u_equals_v"] = t.u_equals_v;
    row["margin"] = t.margin;
    trials.push_back(std::move(row));
  }
  j["trials_log"] = std::move(trials);
  if (with_timing) j["timing"] = {{"wall_seconds", r.wall_seconds}};
  return j.dump(2);
}

std::string oracle_report_to_json(const OracleReport& r, bool with_timing) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["kind"] = "oracle";
  j["max_volume"] = r.max_volume;
  j["betas"] = r.betas;
  ordered_json rows = ordered_json::array();
  for (const OracleRow& row : r.rows) {
    ordered_json o;
    o["geometry"] = row.geometry_id;
    o["beta"] = row.beta;
    o["flip_site"] = row.flip_site;
    o["patterns"] = row.patterns;
    o["max_delta"] = row.max_delta;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  j["comparisons"] = r.comparisons;
  j["max_delta"] = r.max_delta;
  ordered_json single = ordered_json::array();
  for (const SingleSiteRow& row : r.single_site) {
    ordered_json o;
    o["dimension"] = row.dimension;
    o["beta"] = row.beta;
    o["box_value"] = row.box_value;
    o["direct_value"] = row.direct_value;
    o["delta"] = row.delta;
    single.push_back(std::move(o));
  }
  j["single_site"] = std::move(single);
  j["single_site_max_delta"] = r.single_site_max_delta;
  if (with_timing) j["timing"] = {{"wall_seconds", r.wall_seconds}};
  return j.dump(2);
}

}  // namespace dscert

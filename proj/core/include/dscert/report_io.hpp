#pragma once

#include <string>

#include "dscert/bisection.hpp"
#include "dscert/certifier.hpp"
#include "dscert/inequality_lab.hpp"
#include "dscert/oracle_harness.hpp"

namespace dscert {

/// JSON serializers with stable key order and shortest-round-trip number
/// formatting: identical inputs produce identical bytes. Wall-clock fields
/// are emitted only when with_timing is set, so deterministic comparisons
/// can simply serialize without timing.

std::string certificate_to_json(const CertificateReport& r, bool with_timing = true);
std::string bisection_to_json(const BisectionResult& r, bool with_timing = true);
std::string dss_report_to_json(const DssSweepReport& r, bool with_timing = true);
std::string oracle_report_to_json(const OracleReport& r, bool with_timing = true);

/// Grid-scan table as CSV ("beta,sum_k,volume,holds"), '.' decimal point.
std::string bisection_grid_csv(const BisectionResult& r, int volume);

}  // namespace dscert

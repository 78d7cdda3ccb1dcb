#pragma once

namespace dscert {

inline constexpr const char* kVersion = "1.0.0";

// Version of the JSON report layout emitted by report_io.
inline constexpr int kReportSchema = 1;

}  // namespace dscert

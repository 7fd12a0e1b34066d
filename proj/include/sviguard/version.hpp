#pragma once

namespace sviguard {

inline constexpr const char* kVersion = "0.1.0";

// Schema version of the JSON report document. Bumped on any change to the
// set of keys, their order, or their meaning.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace sviguard

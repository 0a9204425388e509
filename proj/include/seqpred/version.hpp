#pragma once

namespace seqpred {

inline constexpr const char* kToolName = "seqpred";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace seqpred

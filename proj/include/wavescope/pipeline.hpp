#pragma once

#include <span>

#include "wavescope/config.hpp"
#include "wavescope/ingest.hpp"
#include "wavescope/report.hpp"

namespace wavescope {

/// Metrics of one head averaged over the samples (one per dump) that did not flag them.
HeadMetrics analyze_head(std::span<const AttentionDump> dumps, std::size_t layer, std::size_t head,
                         const AnalysisConfig& config, std::size_t levels);

/// Full analysis of one or more dumps of the same model; each dump is one sample sequence.
RunReport analyze_dumps(std::span<const AttentionDump> dumps, const AnalysisConfig& config);

}  // namespace wavescope

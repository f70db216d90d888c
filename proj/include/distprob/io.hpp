#pragma once

#include "distprob/dataset.hpp"
#include "distprob/detectors.hpp"
#include "distprob/evaluation.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace distprob::io {

/// Delimited numeric text file. The label column, when named, is given
/// either as a header name or as a 0-based column index; recognized label
/// values are 0/no/normal and 1/yes/outlier/anomaly (case-insensitive).
struct TabularFileSpec {
    std::string path;
    char delimiter = ',';
    bool header = true;
    std::optional<std::string> label_column;
};

core::Dataset read_dataset(const TabularFileSpec& spec);

/// Shortest round-trip decimal representation; parses back bit-exact.
std::string format_double(double value);

/// Writes `content` to a temporary file next to `path` and renames it in.
void atomic_write(const std::string& path, const std::string& content);

/// Score file: header `id,raw_score[,probability]`, one row per point.
void write_scores(const std::string& path, std::span<const std::string> ids,
                  const detectors::ScoreVector& raw,
                  const detectors::ScoreVector* probabilities = nullptr);

struct ScoreFile {
    std::vector<std::string> ids;
    std::vector<double> raw;
    std::optional<std::vector<double>> probabilities;
};

ScoreFile read_scores(const std::string& path);

/// Evaluation report: one CSV row per (detector, k, scheme, distribution, fold).
void write_report(const std::string& path, const evaluation::EvaluationReport& report);

evaluation::EvaluationReport read_report(const std::string& path);

} // namespace distprob::io

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eog/features.hpp"
#include "eog/learn.hpp"
#include "eog/signal.hpp"

namespace eog::io {

namespace fs = std::filesystem;

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

/// `<stem>.json` next to a recording.
[[nodiscard]] fs::path sidecar_path(const fs::path& data);

struct TimedSamples {
    std::vector<double> t;
    std::vector<double> amplitude;
};

/// Rows of a `t_s,amplitude` CSV without spacing checks.
[[nodiscard]] TimedSamples read_timed_csv(const fs::path& path);

/**
 * @brief Load a recording.
 *
 * `.csv` files hold `t_s,amplitude` rows at a uniform 1/fs spacing; the sidecar is optional and
 * fs is inferred from the time column without one. Any other extension is read as raw
 * little-endian float32 and needs a sidecar with `fs`. Sidecar strings, numbers and booleans
 * land in the trace metadata as text. Throws FormatError on malformed content.
 */
[[nodiscard]] SignalTrace read_recording(const fs::path& path);

/// Sidecar JSON text: fs, bit_depth and metadata; "true"/"false" values become booleans.
[[nodiscard]] std::string sidecar_json(const SignalTrace& trace);

void write_recording_csv(const SignalTrace& trace, const fs::path& path);
void write_recording_raw(const SignalTrace& trace, const fs::path& path);

/// Feature matrix with the 87 stacked names plus `label,session`.
void write_feature_csv(const std::vector<features::StackedFeature>& rows, const fs::path& path);
[[nodiscard]] learn::LabeledDataset read_feature_csv(const fs::path& path);
[[nodiscard]] std::string feature_schema_json(double window_s, double hop_s);

/// One numeric column (an optional non-numeric header line is skipped).
[[nodiscard]] std::vector<double> read_sequence_csv(const fs::path& path);
/// Numeric matrix; an optional header line is skipped.
[[nodiscard]] Eigen::MatrixXd read_matrix_csv(const fs::path& path);

[[nodiscard]] std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace eog::io

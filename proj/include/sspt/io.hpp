#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sspt/bands.hpp"
#include "sspt/posterior.hpp"
#include "sspt/simlab.hpp"

namespace sspt {

using ordered_json = nlohmann::ordered_json;

/// Round-trip decimal formatting ("%.17g", '.' decimal, no locale).
std::string format_double(double v);

std::string schedule_name(SlabSchedule schedule);
SlabSchedule schedule_from_name(const std::string& name);

/// Versioned posterior document: prior block plus per-level arrays of
/// {n0, n1, pi_tilde}. Loading rebuilds the full count tree from the node
/// counts, so a reloaded posterior reproduces every downstream quantity.
ordered_json posterior_to_json(const PosteriorTree& post, std::uint64_t seed);
PosteriorTree posterior_from_json(const ordered_json& doc);

ordered_json band_result_to_json(const BandResult& result);

/// One line per newline-separated real; returns the 1-based line number of
/// the first malformed or out-of-range entry through bad_line (0 if clean).
std::vector<double> read_sample_file(const std::filesystem::path& path,
                                     std::size_t* bad_line);

void write_density_csv(const std::filesystem::path& path,
                       const HistogramDensity& hist);
void write_field_support_csv(const std::filesystem::path& path,
                             const WaveletField& field);
void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report);
void write_bvm_csv(const std::filesystem::path& path, const BvmReport& report);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sspt

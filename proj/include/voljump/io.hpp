#pragma once

// CSV and JSON serialisation. Floating point values are written with 17
// significant digits so that every value round-trips exactly.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "voljump/calibrator.hpp"
#include "voljump/detector.hpp"
#include "voljump/model.hpp"
#include "voljump/series.hpp"
#include "voljump/theory.hpp"

namespace voljump {

std::string format_double(double v);

/// Reads a `date,close` CSV. Dates must be ISO-8601; gaps longer than a week
/// are reported through warnings (when given) rather than rejected.
PriceSeries ingest(const std::string& path, std::vector<std::string>* warnings = nullptr);
PriceSeries parse_prices(std::istream& in, const std::string& source,
                         std::vector<std::string>* warnings = nullptr);

void write_prices(std::ostream& out, const PriceSeries& s);
void write_path(std::ostream& out, const PathSample& path);
void write_train(std::ostream& out, const ShockTrain& train);
void write_curve(std::ostream& out, const CorrDecayCurve& curve);
void write_estimates(std::ostream& out, std::span<const EstimateRow> rows,
                     const std::string& first_column = "lag");
void write_xy(std::ostream& out, std::span<const double> x, std::span<const double> y,
              const std::string& header);
void write_shocks(std::ostream& out, const ShockReport& report);
void write_histogram(std::ostream& out, const ShockReport& report,
                     const std::vector<std::string>& dates);

std::string shock_report_json(const ShockReport& report);
std::string calibration_json(const CalibrationReport& report);

/// Writes text to a file, throwing config-error when it cannot be opened.
void write_file(const std::string& path, const std::string& text);

}  // namespace voljump

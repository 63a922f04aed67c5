#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "flow/transport.hpp"
#include "loop/mane.hpp"
#include "magcurv/scan.hpp"
#include "solve/record.hpp"

namespace magcurv {

inline constexpr int kSchemaVersion = 1;

// Wraps a command payload with schema_version, command, system and seed.
nlohmann::json envelope(const RunConfig& cfg, const ChartedSystem& sys, nlohmann::json result);

// Error document written to stderr on failure.
nlohmann::json error_json(const std::string& kind, const std::string& message,
                          const std::vector<SchemaIssue>& issues = {});

// Curvature at seeded random unit-sphere-bundle points: x uniform in the
// region, v a random unit vector, w a random unit vector orthogonal to v.
struct CurvatureRow {
  Vec x, v, w;
  double k = 0.0;
  double sec = 0.0;
  double ric = 0.0;
  double trace_a = 0.0;
};

std::vector<CurvatureRow> curvature_rows(const ChartedSystem& sys, const std::vector<double>& ks, int samples,
                                         std::uint64_t seed, const ScanRegion& region);
// Columns: x1..xn, v1..vn, w1..wn, k, sec, ric, trace_a.
std::string curvature_csv(const std::vector<CurvatureRow>& rows, int n);
nlohmann::json curvature_json(const std::vector<CurvatureRow>& rows);

struct TransportReport {
  Orbit orbit;
  TransportResult transport;
  std::vector<double> gram_drift;  // max |V^T g V - V0^T g0 V0| per sample
  double max_gram_drift = 0.0;
  double end_orthogonality = 0.0;  // |P^T g(T) P - g(0)|, P the end map
};

TransportReport transport_report(const ChartedSystem& sys, const Orbit& orbit, double tolerance);
// Columns: t, V<c>_<i> for each transported coordinate vector c and component i, gram_drift.
std::string transport_csv(const TransportReport& r, int n);
nlohmann::json transport_json(const ChartedSystem& sys, const TransportReport& r);

// Columns: radius, sup_norm.
std::string mane_csv(const ManeReport& r);

nlohmann::json records_json(const ChartedSystem& sys, const std::vector<OrbitRecord>& records);

}  // namespace magcurv

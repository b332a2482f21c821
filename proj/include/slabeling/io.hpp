#pragma once

#include "slabeling/core.hpp"
#include "slabeling/metrics.hpp"
#include "slabeling/samplers.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace slabeling::io {

using Json = nlohmann::ordered_json;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- point clouds -----------------------------------------------------------
// CSV header: x0,...,x{D-1}[,label]; rows printed with %.17g. The JSON
// sidecar carries seed, specs, weights, tangent bases and ambiguous indices.

void write_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_cloud_csv(const std::string& path);

void write_sidecar_json(const std::string& path, const PointCloud& cloud,
                        bool include_tangents = true);
void read_sidecar_json(const std::string& path, PointCloud& cloud);

Json spec_to_json(const ManifoldSpec& spec);
ManifoldSpec spec_from_json(const Json& j);

// ---- schedules --------------------------------------------------------------

Json schedule_to_json(const ParamSchedule& sched);
ParamSchedule schedule_from_json(const Json& j);
void write_schedule(const std::string& path, const ParamSchedule& sched);
ParamSchedule read_schedule(const std::string& path);

// ---- results ----------------------------------------------------------------
// wall_ms is the only field allowed to differ between reruns; everything
// else is deterministic given the cloud and schedule.

Json result_to_json(const StratificationResult& res);
StratificationResult result_from_json(const Json& j);
void write_result(const std::string& path, const StratificationResult& res);
StratificationResult read_result(const std::string& path);

/// The deterministic payload: result JSON with the run-provenance fields
/// (wall time, worker count) stripped.
Json result_payload(const Json& result_json);

// ---- evaluation -------------------------------------------------------------

inline constexpr const char* kEvalCsvHeader =
    "n,seed,layer,dim,hausdorff,clustering,tangent,delta,resolution,wall_ms";

void append_eval_csv(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_eval_csv(const std::string& path);

Json rate_fits_to_json(const std::vector<RateFit>& fits);

// ---- generic ----------------------------------------------------------------

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace slabeling::io

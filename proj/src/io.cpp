#include "slabeling/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace slabeling::io {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

Json matrix_cols_to_json(const Matrix& m) {
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

Matrix matrix_cols_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DataError(std::string("expected column array for ") + what);
  const auto rows = j.front().size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(j.size()));
  for (size_t c = 0; c < j.size(); ++c) {
    if (j[c].size() != rows) throw DataError(std::string("ragged column array for ") + what);
    for (size_t r = 0; r < rows; ++r)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[c][r].get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  const int d = cloud.ambient_dim();
  for (int c = 0; c < d; ++c) out << (c ? "," : "") << "x" << c;
  if (!cloud.labels.empty()) out << ",label";
  out << "\n";
  for (long i = 0; i < cloud.size(); ++i) {
    for (int c = 0; c < d; ++c) out << (c ? "," : "") << fmt_double(cloud.points(c, i));
    if (!cloud.labels.empty()) out << "," << cloud.labels[static_cast<size_t>(i)];
    out << "\n";
  }
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  const auto header = split_csv_line(line);
  int coord_cols = 0;
  bool has_label = false;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x" + std::to_string(i)) {
      ++coord_cols;
    } else if (i + 1 == header.size() && header[i] == "label") {
      has_label = true;
    } else {
      throw DataError(path + ": unexpected CSV header field '" + header[i] + "'");
    }
  }
  if (coord_cols < 1) throw DataError(path + ": no coordinate columns");

  std::vector<double> values;
  std::vector<int> labels;
  long rows = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != coord_cols + (has_label ? 1 : 0))
      throw DataError(path + ":" + std::to_string(line_no) + ": wrong field count");
    for (int c = 0; c < coord_cols; ++c) {
      try {
        const double v = std::stod(fields[static_cast<size_t>(c)]);
        if (!std::isfinite(v)) throw std::invalid_argument("nonfinite");
        values.push_back(v);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": bad coordinate '" +
                        fields[static_cast<size_t>(c)] + "'");
      }
    }
    if (has_label) labels.push_back(std::stoi(fields.back()));
    ++rows;
  }

  PointCloud cloud;
  cloud.points.resize(coord_cols, rows);
  for (long i = 0; i < rows; ++i)
    for (int c = 0; c < coord_cols; ++c)
      cloud.points(c, i) = values[static_cast<size_t>(i) * coord_cols + static_cast<size_t>(c)];
  cloud.labels = std::move(labels);
  return cloud;
}

Json spec_to_json(const ManifoldSpec& spec) {
  Json j;
  j["kind"] = kind_name(spec.kind);
  j["dim"] = spec.dim;
  j["ambient"] = spec.ambient;
  j["scale"] = spec.scale;
  j["major_radius"] = spec.major_radius;
  j["minor_radius"] = spec.minor_radius;
  j["translation"] = vector_to_json(spec.translation);
  j["basis"] = matrix_cols_to_json(spec.basis);
  return j;
}

ManifoldSpec spec_from_json(const Json& j) {
  ManifoldSpec spec;
  spec.kind = kind_from_name(j.at("kind").get<std::string>());
  spec.dim = j.at("dim").get<int>();
  spec.ambient = j.at("ambient").get<int>();
  spec.scale = j.at("scale").get<double>();
  spec.major_radius = j.value("major_radius", 2.0);
  spec.minor_radius = j.value("minor_radius", 0.5);
  spec.translation = vector_from_json(j.at("translation"));
  spec.basis = matrix_cols_from_json(j.at("basis"), "basis");
  spec.validate();
  return spec;
}

void write_sidecar_json(const std::string& path, const PointCloud& cloud,
                        bool include_tangents) {
  Json j;
  j["seed"] = cloud.seed;
  j["ambient_dim"] = cloud.ambient_dim();
  j["n"] = cloud.size();
  Json specs = Json::array();
  for (const ManifoldSpec& s : cloud.specs) specs.push_back(spec_to_json(s));
  j["specs"] = std::move(specs);
  j["weights"] = cloud.weights;
  if (!cloud.ambiguous.empty()) j["ambiguous"] = cloud.ambiguous;
  if (include_tangents && !cloud.tangents.empty()) {
    Json tangents = Json::array();
    for (const Matrix& t : cloud.tangents) tangents.push_back(matrix_cols_to_json(t));
    j["tangents"] = std::move(tangents);
  }
  write_json_file(path, j);
}

void read_sidecar_json(const std::string& path, PointCloud& cloud) {
  const Json j = read_json_file(path);
  cloud.seed = j.value("seed", std::uint64_t{0});
  cloud.specs.clear();
  for (const Json& s : j.value("specs", Json::array())) cloud.specs.push_back(spec_from_json(s));
  cloud.weights = j.value("weights", std::vector<double>{});
  cloud.ambiguous = j.value("ambiguous", std::vector<int>{});
  cloud.tangents.clear();
  if (j.contains("tangents")) {
    for (const Json& t : j.at("tangents"))
      cloud.tangents.push_back(matrix_cols_from_json(t, "tangents"));
    if (cloud.tangents.size() != static_cast<size_t>(cloud.size()))
      throw DataError(path + ": tangent count does not match the cloud");
  }
}

Json schedule_to_json(const ParamSchedule& sched) {
  Json j;
  j["d_max"] = sched.d_max;
  Json h_par = Json::array(), h_perp = Json::array(), r = Json::array(), n_min = Json::array(),
       delta = Json::array(), kappa = Json::array();
  for (const DimParams& p : sched.dims) {
    h_par.push_back(p.h_par);
    h_perp.push_back(p.h_perp);
    r.push_back(p.r);
    n_min.push_back(p.n_min);
    delta.push_back(p.delta);
    kappa.push_back(p.kappa);
  }
  j["h_par"] = std::move(h_par);
  j["h_perp"] = std::move(h_perp);
  j["r"] = std::move(r);
  j["n_min"] = std::move(n_min);
  j["delta"] = std::move(delta);
  j["kappa"] = std::move(kappa);
  const ModelConstants& c = sched.constants;
  j["kappa_max"] = c.kappa_max;
  j["a_min"] = c.a_min;
  j["a_max"] = c.a_max;
  j["nu_max"] = c.nu_max;
  j["alpha_min"] = c.alpha_min;
  j["gamma"] = c.gamma;
  j["upsilon"] = c.upsilon;
  j["sigma"] = c.sigma;
  j["zeta"] = c.zeta;
  j["q"] = c.q;
  return j;
}

ParamSchedule schedule_from_json(const Json& j) {
  ParamSchedule sched;
  sched.d_max = j.at("d_max").get<int>();
  if (sched.d_max < 1) throw DataError("schedule: d_max must be >= 1");
  const auto h_par = j.at("h_par"), h_perp = j.at("h_perp"), r = j.at("r"),
             n_min = j.at("n_min"), delta = j.at("delta"), kappa = j.at("kappa");
  const auto want = static_cast<size_t>(sched.d_max);
  for (const Json& arr : {h_par, h_perp, r, n_min, delta, kappa})
    if (arr.size() != want) throw DataError("schedule: per-dimension arrays must have d_max entries");
  sched.dims.resize(want);
  for (size_t d = 0; d < want; ++d) {
    sched.dims[d].h_par = h_par[d].get<double>();
    sched.dims[d].h_perp = h_perp[d].get<double>();
    sched.dims[d].r = r[d].get<double>();
    sched.dims[d].n_min = n_min[d].get<int>();
    sched.dims[d].delta = delta[d].get<double>();
    sched.dims[d].kappa = kappa[d].get<double>();
  }
  ModelConstants& c = sched.constants;
  c.kappa_max = j.value("kappa_max", 1.0);
  c.a_min = j.value("a_min", 1.0);
  c.a_max = j.value("a_max", 1.0);
  c.nu_max = j.value("nu_max", c.nu_max);
  c.alpha_min = j.value("alpha_min", 1.0);
  c.gamma = j.value("gamma", 1.0);
  c.upsilon = j.value("upsilon", 1.0);
  c.sigma = j.value("sigma", 3.0);
  c.zeta = j.value("zeta", std::vector<double>{});
  c.q = j.value("q", 1.0);
  sched.validate();
  return sched;
}

void write_schedule(const std::string& path, const ParamSchedule& sched) {
  write_json_file(path, schedule_to_json(sched));
}

ParamSchedule read_schedule(const std::string& path) {
  return schedule_from_json(read_json_file(path));
}

Json result_to_json(const StratificationResult& res) {
  Json j;
  j["k_hat"] = res.k_hat;
  j["dims"] = res.dims();
  Json layers = Json::array();
  for (const LayerDetection& layer : res.layers) {
    Json lj;
    lj["dim"] = layer.dim;
    Json tuples = Json::array();
    for (long t = 0; t < layer.tuple_count(); ++t) tuples.push_back(layer.tuple_at(t));
    lj["tuples"] = std::move(tuples);
    lj["labeled"] = layer.labeled;
    lj["pruned"] = layer.pruned;
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  j["residual"] = res.residual;
  j["params_used"] = schedule_to_json(res.params_used);
  Json meta;
  meta["threads"] = res.metadata.threads;
  meta["max_tuples_per_anchor"] = res.metadata.max_tuples_per_anchor;
  meta["cap_hit"] = res.metadata.cap_hit;
  meta["cloud_seed"] = res.metadata.cloud_seed;
  j["metadata"] = std::move(meta);
  j["wall_ms"] = res.metadata.wall_ms;
  return j;
}

StratificationResult result_from_json(const Json& j) {
  StratificationResult res;
  res.k_hat = j.at("k_hat").get<int>();
  for (const Json& lj : j.at("layers")) {
    LayerDetection layer;
    layer.dim = lj.at("dim").get<int>();
    for (const Json& t : lj.at("tuples"))
      for (const Json& idx : t) layer.tuples.push_back(idx.get<int>());
    layer.labeled = lj.at("labeled").get<std::vector<int>>();
    layer.pruned = lj.at("pruned").get<std::vector<int>>();
    res.layers.push_back(std::move(layer));
  }
  res.residual = j.at("residual").get<std::vector<int>>();
  res.params_used = schedule_from_json(j.at("params_used"));
  const Json& meta = j.at("metadata");
  res.metadata.threads = meta.value("threads", 1);
  res.metadata.max_tuples_per_anchor = meta.value("max_tuples_per_anchor", -1L);
  res.metadata.cap_hit = meta.value("cap_hit", false);
  res.metadata.cloud_seed = meta.value("cloud_seed", std::uint64_t{0});
  res.metadata.wall_ms = j.value("wall_ms", 0.0);
  return res;
}

void write_result(const std::string& path, const StratificationResult& res) {
  write_json_file(path, result_to_json(res));
}

StratificationResult read_result(const std::string& path) {
  return result_from_json(read_json_file(path));
}

Json result_payload(const Json& result_json) {
  Json j = result_json;
  j.erase("wall_ms");
  if (j.contains("metadata")) j.at("metadata").erase("threads");
  return j;
}

void append_eval_csv(const std::string& path, const std::vector<EvalRecord>& records) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot open for writing: " + path);
  if (fresh) out << kEvalCsvHeader << "\n";
  for (const EvalRecord& r : records) {
    out << r.n << "," << r.seed << "," << r.layer << "," << r.dim << ","
        << fmt_double(r.hausdorff_error) << "," << fmt_double(r.clustering_err) << ","
        << fmt_double(r.tangent_err) << "," << fmt_double(r.delta) << ","
        << fmt_double(r.resolution) << "," << fmt_double(r.wall_ms) << "\n";
  }
}

std::vector<EvalRecord> read_eval_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kEvalCsvHeader))
    throw DataError(path + ": bad evaluation CSV header");
  std::vector<EvalRecord> records;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10)
      throw DataError(path + ":" + std::to_string(line_no) + ": wrong field count");
    EvalRecord r;
    try {
      r.n = std::stol(f[0]);
      r.seed = std::stoull(f[1]);
      r.layer = std::stoi(f[2]);
      r.dim = std::stoi(f[3]);
      r.hausdorff_error = std::stod(f[4]);
      r.clustering_err = std::stod(f[5]);
      r.tangent_err = std::stod(f[6]);
      r.delta = std::stod(f[7]);
      r.resolution = std::stod(f[8]);
      r.wall_ms = std::stod(f[9]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": unparsable row");
    }
    records.push_back(r);
  }
  return records;
}

Json rate_fits_to_json(const std::vector<RateFit>& fits) {
  Json arr = Json::array();
  for (const RateFit& f : fits) {
    Json j;
    j["dim"] = f.dim;
    j["loss"] = f.loss;
    j["slope"] = f.slope;
    j["stderr"] = f.stderr_;
    j["n_points"] = f.n_points;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << j.dump(1) << "\n";
}

}  // namespace slabeling::io

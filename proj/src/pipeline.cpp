#include "multifuse/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "multifuse/io.hpp"

namespace multifuse {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage '" + name + "': " + e.detail());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Loading and filtering

std::vector<AbundanceTable> load_abundance_tables(const std::vector<fs::path>& paths) {
  struct RawTable {
    std::string name;
    Labels sites;
    std::unordered_map<std::string, Eigen::RowVectorXd> rows;
  };
  std::vector<RawTable> raw;
  Labels universe;
  std::set<std::string> seen_entities;
  std::set<std::string> seen_layers;

  for (const auto& path : paths) {
    const io::CsvDocument doc = io::read_csv(path);
    RawTable t;
    t.name = path.stem().string();
    if (!seen_layers.insert(t.name).second) {
      throw Error(ErrorKind::ParseError, path.string() + ": duplicate layer name '" + t.name + "'");
    }
    t.sites.assign(doc.header.fields.begin() + 1, doc.header.fields.end());
    if (t.sites.empty()) {
      throw Error(ErrorKind::EmptyTable, path.string() + ": header lists no sites");
    }
    if (std::set<std::string>(t.sites.begin(), t.sites.end()).size() != t.sites.size()) {
      throw Error(ErrorKind::ParseError, path.string() + ": duplicate site ids in header");
    }
    if (doc.rows.empty()) throw Error(ErrorKind::EmptyTable, path.string() + ": no entity rows");
    for (const auto& row : doc.rows) {
      const std::string where = path.string() + ":" + std::to_string(row.line);
      const std::string& id = row.fields[0];
      if (id.empty()) throw Error(ErrorKind::ParseError, where + ": empty entity id");
      Eigen::RowVectorXd values(static_cast<Eigen::Index>(t.sites.size()));
      for (std::size_t k = 0; k < t.sites.size(); ++k) {
        const double v = io::parse_double(row.fields[k + 1], where);
        if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, where + ": non-finite value");
        if (v < 0.0) {
          throw Error(ErrorKind::ParseError, where + ": negative abundance for '" + id + "'");
        }
        values(static_cast<Eigen::Index>(k)) = v;
      }
      if (!t.rows.emplace(id, std::move(values)).second) {
        throw Error(ErrorKind::ParseError, where + ": duplicate entity id '" + id + "'");
      }
      if (seen_entities.insert(id).second) universe.push_back(id);
    }
    raw.push_back(std::move(t));
  }

  std::vector<AbundanceTable> out;
  out.reserve(raw.size());
  for (auto& t : raw) {
    AbundanceTable table{t.name, universe, t.sites,
                         Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(universe.size()),
                                               static_cast<Eigen::Index>(t.sites.size()))};
    for (std::size_t i = 0; i < universe.size(); ++i) {
      const auto it = t.rows.find(universe[i]);
      if (it != t.rows.end()) table.values.row(static_cast<Eigen::Index>(i)) = it->second;
    }
    out.push_back(std::move(table));
  }
  return out;
}

FilterResult filter_entities(std::vector<AbundanceTable> tables) {
  if (tables.empty()) throw Error(ErrorKind::InvalidInput, "no tables to filter");
  const Labels& ids = tables.front().entity_ids;
  const std::size_t n = ids.size();
  FilterResult result;
  result.log.total = n;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    bool anywhere = false;
    const AbundanceTable* empty_layer = nullptr;
    for (const auto& t : tables) {
      const bool present = (t.values.row(row).array() > 0.0).any();
      anywhere = anywhere || present;
      if (!present && empty_layer == nullptr) empty_layer = &t;
    }
    if (!anywhere) {
      ++result.log.removed_absent_everywhere;
      result.log.removals.push_back({ids[i], "absent-everywhere", ""});
    } else if (empty_layer != nullptr) {
      ++result.log.removed_absent_in_layer;
      result.log.removals.push_back({ids[i], "absent-in-layer", empty_layer->layer_name});
    } else {
      keep.push_back(i);
    }
  }
  if (keep.empty()) {
    throw Error(ErrorKind::EmptyAfterFilter,
                "all " + std::to_string(n) + " entities were removed by the filters");
  }

  for (auto& t : tables) {
    AbundanceTable kept{t.layer_name, {}, t.site_ids,
                        Eigen::MatrixXd(static_cast<Eigen::Index>(keep.size()), t.values.cols())};
    for (std::size_t r = 0; r < keep.size(); ++r) {
      kept.entity_ids.push_back(t.entity_ids[keep[r]]);
      kept.values.row(static_cast<Eigen::Index>(r)) = t.values.row(static_cast<Eigen::Index>(keep[r]));
    }
    result.tables.push_back(std::move(kept));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Names and config

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Snf: return "snf";
    case Method::SmaF: return "sma-f";
    case Method::SmaR: return "sma-r";
    case Method::SmaW: return "sma-w";
  }
  return "unknown";
}

std::string_view to_string(WeightsMode m) noexcept {
  switch (m) {
    case WeightsMode::Paired: return "paired";
    case WeightsMode::Uniform: return "uniform";
    case WeightsMode::RvLeadingEigenvector: return "rv-pc";
    case WeightsMode::RvRowsum: return "rv-rowsum";
  }
  return "unknown";
}

std::string_view to_string(ExportFormat f) noexcept {
  switch (f) {
    case ExportFormat::EdgeList: return "edge-list";
    case ExportFormat::GraphMl: return "graphml";
    case ExportFormat::CsvMatrix: return "csv-matrix";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::Snf, Method::SmaF, Method::SmaR, Method::SmaW}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown method '" + std::string(s) + "'");
}

WeightsMode parse_weights_mode(std::string_view s) {
  if (s == "rv-leading-eigenvector") return WeightsMode::RvLeadingEigenvector;
  for (WeightsMode m : {WeightsMode::Paired, WeightsMode::Uniform,
                        WeightsMode::RvLeadingEigenvector, WeightsMode::RvRowsum}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown weights mode '" + std::string(s) + "'");
}

ExportFormat parse_export_format(std::string_view s) {
  for (ExportFormat f : {ExportFormat::EdgeList, ExportFormat::GraphMl, ExportFormat::CsvMatrix}) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown export format '" + std::string(s) + "'");
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::ParseError, where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::ParseError, "unknown key '" + key + "' in " + where);
    }
  }
}

void read_barycenter(const json& obj, BarycenterConfig& cfg, const std::string& where) {
  reject_unknown_keys(obj, {"tol", "max_iter", "jitter"}, where);
  if (obj.contains("tol")) cfg.tol = obj["tol"].get<double>();
  if (obj.contains("max_iter")) cfg.max_iter = obj["max_iter"].get<int>();
  if (obj.contains("jitter")) cfg.jitter = obj["jitter"].get<double>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc, const fs::path& base_dir) {
  PipelineConfig cfg;
  try {
    reject_unknown_keys(doc,
                        {"inputs", "output_dir", "similarity", "snf", "sma", "weights", "methods",
                         "clustering", "export"},
                        "config");
    if (!doc.contains("inputs")) throw Error(ErrorKind::ParseError, "config has no 'inputs'");
    for (const auto& p : doc["inputs"]) {
      const fs::path path = p.get<std::string>();
      cfg.inputs.push_back(path.is_absolute() ? path : base_dir / path);
    }
    if (doc.contains("output_dir")) {
      const fs::path out = doc["output_dir"].get<std::string>();
      cfg.output_dir = out.is_absolute() ? out : base_dir / out;
    }
    if (doc.contains("similarity")) {
      const json& sim = doc["similarity"];
      reject_unknown_keys(sim, {"kind", "sigma"}, "similarity");
      const std::string kind = sim.value("kind", "rbf");
      if (kind == "rbf") {
        cfg.similarity = SimilarityKind::Rbf;
      } else if (kind == "jaccard") {
        cfg.similarity = SimilarityKind::Jaccard;
      } else if (kind == "cosine") {
        cfg.similarity = SimilarityKind::Cosine;
      } else {
        throw Error(ErrorKind::InvalidParameter,
                    "similarity kind '" + kind + "' cannot be built from abundance tables");
      }
      if (sim.contains("sigma") && !(sim["sigma"].is_string() && sim["sigma"] == "auto")) {
        cfg.sigma = sim["sigma"].get<double>();
      }
    }
    if (doc.contains("snf")) {
      const json& snf = doc["snf"];
      reject_unknown_keys(snf, {"k", "epsilon", "max_iter", "normalization"}, "snf");
      if (snf.contains("k") && !(snf["k"].is_string() && snf["k"] == "auto")) {
        cfg.snf_k = snf["k"].get<int>();
      }
      if (snf.contains("epsilon")) cfg.snf.epsilon = snf["epsilon"].get<double>();
      if (snf.contains("max_iter")) cfg.snf.max_iter = snf["max_iter"].get<int>();
      if (snf.contains("normalization")) {
        const std::string norm = snf["normalization"].get<std::string>();
        if (norm == "global") {
          cfg.snf.normalization = StatusNormalization::Global;
        } else if (norm == "row") {
          cfg.snf.normalization = StatusNormalization::Row;
        } else {
          throw Error(ErrorKind::InvalidParameter, "unknown snf normalization '" + norm + "'");
        }
      }
    }
    if (doc.contains("sma")) {
      const json& sma = doc["sma"];
      reject_unknown_keys(sma, {"frobenius", "riemannian", "wasserstein"}, "sma");
      if (sma.contains("frobenius")) read_barycenter(sma["frobenius"], cfg.frobenius, "sma.frobenius");
      if (sma.contains("riemannian")) read_barycenter(sma["riemannian"], cfg.riemannian, "sma.riemannian");
      if (sma.contains("wasserstein")) {
        read_barycenter(sma["wasserstein"], cfg.wasserstein, "sma.wasserstein");
      }
    }
    if (doc.contains("weights")) cfg.weights = parse_weights_mode(doc["weights"].get<std::string>());
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("clustering")) {
      const json& cl = doc["clustering"];
      reject_unknown_keys(cl, {"resolution", "seed"}, "clustering");
      if (cl.contains("resolution")) cfg.resolution = cl["resolution"].get<double>();
      if (cl.contains("seed")) cfg.seed = cl["seed"].get<std::uint64_t>();
    }
    if (doc.contains("export")) {
      const json& ex = doc["export"];
      reject_unknown_keys(ex, {"formats", "threshold"}, "export");
      if (ex.contains("formats")) {
        cfg.exports.clear();
        for (const auto& f : ex["formats"]) {
          cfg.exports.push_back(parse_export_format(f.get<std::string>()));
        }
      }
      if (ex.contains("threshold")) cfg.export_threshold = ex["threshold"].get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidParameter) throw;
    throw Error(ErrorKind::ParseError, "config: " + e.detail());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

void PipelineConfig::validate() const {
  if (inputs.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "at least two input layers are required");
  }
  for (const auto& p : inputs) {
    if (!fs::exists(p)) throw Error(ErrorKind::IoError, "input " + p.string() + " does not exist");
  }
  if (methods.empty()) throw Error(ErrorKind::InvalidParameter, "no methods requested");
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw Error(ErrorKind::InvalidParameter, "a method is listed twice");
  }
  if (sigma && !(*sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
  frobenius.validate();
  riemannian.validate();
  wasserstein.validate();
}

// ---------------------------------------------------------------------------
// Running

const MethodReport* RunReport::find(Method m) const {
  for (const auto& r : methods) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

bool RunReport::all_converged() const {
  return std::all_of(methods.begin(), methods.end(),
                     [](const MethodReport& r) { return r.fusion.converged; });
}

Multiplex build_multiplex(const std::vector<AbundanceTable>& tables, const PipelineConfig& cfg,
                          std::vector<double>* sigmas) {
  std::vector<SimilarityLayer> layers;
  std::vector<std::string> names;
  for (const auto& t : tables) {
    names.push_back(t.layer_name);
    if (cfg.similarity == SimilarityKind::Rbf) {
      const FeatureTable features(t.entity_ids, t.values);
      const double sigma = cfg.sigma ? *cfg.sigma : default_sigma(features);
      if (sigmas) sigmas->push_back(sigma);
      layers.push_back(rbf_similarity(features, sigma));
    } else {
      const Eigen::MatrixXd presence = (t.values.array() > 0.0).cast<double>().matrix().transpose();
      const IncidenceMatrix b(t.site_ids, t.entity_ids, presence);
      const SymMatrix g = one_mode_projection(b);
      layers.push_back(cfg.similarity == SimilarityKind::Jaccard
                           ? jaccard_from_projection(g, t.entity_ids)
                           : cosine_from_projection(g, t.entity_ids));
    }
  }
  return Multiplex(std::move(layers), std::move(names));
}

namespace {

WeightVector weights_for(Method method, const PipelineConfig& cfg, const RunReport& report) {
  const std::size_t m = report.layer_names.size();
  switch (cfg.weights) {
    case WeightsMode::Uniform: return WeightVector::uniform(m);
    case WeightsMode::RvLeadingEigenvector: return WeightVector(report.weights_frobenius);
    case WeightsMode::RvRowsum: return WeightVector(report.weights_rowsum);
    case WeightsMode::Paired:
      return method == Method::SmaF ? WeightVector(report.weights_frobenius)
                                    : WeightVector(report.weights_rowsum);
  }
  return WeightVector::uniform(m);
}

}  // namespace

RunReport compute_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  RunReport report;

  auto tables = stage("load", [&] { return load_abundance_tables(cfg.inputs); });
  FilterResult filtered = stage("filter", [&] { return filter_entities(std::move(tables)); });
  report.filter = std::move(filtered.log);
  report.entities = filtered.tables.front().entity_ids;
  for (const auto& t : filtered.tables) {
    report.layer_names.push_back(t.layer_name);
    report.layer_sites.push_back(static_cast<int>(t.site_ids.size()));
  }

  const Multiplex multiplex =
      stage("similarity", [&] { return build_multiplex(filtered.tables, cfg, &report.sigmas); });
  const Eigen::Index n = multiplex.nodes();

  stage("weights", [&] {
    report.rv = rv_matrix(multiplex);
    report.weights_frobenius = weights_frobenius(report.rv).values();
    report.weights_rowsum = weights_rowsum(report.rv).values();
    return 0;
  });

  for (Method method : cfg.methods) {
    const std::string name(to_string(method));
    FusionResult fusion = stage(name, [&] {
      if (method == Method::Snf) {
        SnfConfig snf = cfg.snf;
        snf.k = cfg.snf_k ? *cfg.snf_k : SnfConfig::defaults_for(n).k;
        report.snf_k = snf.k;
        return snf_fuse(multiplex, snf);
      }
      const BarycenterConfig& bc = method == Method::SmaF   ? cfg.frobenius
                                   : method == Method::SmaR ? cfg.riemannian
                                                            : cfg.wasserstein;
      BarycenterConfig run = bc;
      run.metric = method == Method::SmaF   ? BarycenterMetric::Frobenius
                   : method == Method::SmaR ? BarycenterMetric::Riemannian
                                            : BarycenterMetric::Wasserstein;
      return barycenter(multiplex, weights_for(method, cfg, report), run);
    });
    std::size_t clipped = 0;
    double max_clip = 0.0;
    SimilarityLayer monoplex = to_similarity_layer(fusion, &clipped, &max_clip);
    Partition partition =
        stage(name + " clustering", [&] { return louvain_communities(monoplex, cfg.resolution, cfg.seed); });
    report.methods.push_back(MethodReport{method, std::move(fusion), std::move(monoplex), clipped,
                                          max_clip, std::move(partition)});
  }

  stage("distance correlation", [&] {
    std::vector<std::string> names;
    std::vector<SimilarityLayer> monoplexes;
    for (const auto& r : report.methods) {
      names.emplace_back(to_string(r.method));
      monoplexes.push_back(r.monoplex);
    }
    report.monoplex_dcor = correlation_table(names, monoplexes);
    if (const MethodReport* snf = report.find(Method::Snf)) {
      for (const auto& layer : multiplex.layers()) {
        report.snf_layer_dcor.push_back(distance_correlation(snf->monoplex, layer));
      }
    }
    return 0;
  });
  return report;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
  RunReport report = compute_pipeline(cfg);
  stage("write", [&] {
    write_artifacts(report, cfg);
    return 0;
  });
  return report;
}

// ---------------------------------------------------------------------------
// Reports and exports

namespace {

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

ordered_json report_to_json(const RunReport& report) {
  ordered_json doc;
  doc["format"] = "multifuse-report/1";
  doc["entities"] = report.entities;
  doc["layers"] = report.layer_names;

  ordered_json filter;
  filter["total"] = report.filter.total;
  filter["removed_absent_everywhere"] = report.filter.removed_absent_everywhere;
  filter["removed_absent_in_layer"] = report.filter.removed_absent_in_layer;
  filter["retained"] = report.filter.retained();
  ordered_json removals = ordered_json::array();
  for (const auto& r : report.filter.removals) {
    removals.push_back({{"entity", r.entity}, {"reason", r.reason}, {"layer", r.layer}});
  }
  filter["removals"] = std::move(removals);
  doc["filter"] = std::move(filter);

  ordered_json layers = ordered_json::array();
  for (std::size_t l = 0; l < report.layer_names.size(); ++l) {
    ordered_json layer;
    layer["name"] = report.layer_names[l];
    layer["sites"] = report.layer_sites[l];
    if (l < report.sigmas.size()) layer["sigma"] = report.sigmas[l];
    layers.push_back(std::move(layer));
  }
  doc["layer_details"] = std::move(layers);

  doc["rv_matrix"] = matrix_json(report.rv.matrix());
  doc["weights"] = {{"w_F", report.weights_frobenius}, {"w_R", report.weights_rowsum}};

  ordered_json methods = ordered_json::array();
  for (const auto& r : report.methods) {
    ordered_json m;
    m["method"] = to_string(r.method);
    m["iterations"] = r.fusion.iterations;
    m["residual"] = r.fusion.residual;
    m["converged"] = r.fusion.converged;
    m["weights"] = r.fusion.weights;
    m["jittered_layers"] = r.fusion.jittered_layers;
    m["zero_rows"] = r.fusion.zero_rows;
    m["clipped_entries"] = r.clipped_entries;
    m["max_clip"] = r.max_clip;
    m["communities"] = r.partition.count();
    m["modularity"] = r.partition.modularity;
    m["partition"] = r.partition.community;
    methods.push_back(std::move(m));
  }
  doc["methods"] = std::move(methods);
  if (report.find(Method::Snf)) doc["snf_k"] = report.snf_k;

  doc["dcor_monoplex"] = {{"names", report.monoplex_dcor.names},
                          {"values", matrix_json(report.monoplex_dcor.values)}};
  ordered_json snf_layers = ordered_json::array();
  for (std::size_t l = 0; l < report.snf_layer_dcor.size(); ++l) {
    snf_layers.push_back({{"layer", report.layer_names[l]}, {"dcor", report.snf_layer_dcor[l]}});
  }
  doc["dcor_snf_layers"] = std::move(snf_layers);
  return doc;
}

std::string render_graph(const SimilarityLayer& s, const Partition& p, ExportFormat format,
                         double threshold) {
  const Labels& labels = s.labels();
  const Eigen::MatrixXd& m = s.matrix();
  const Eigen::Index n = s.size();
  std::ostringstream out;
  switch (format) {
    case ExportFormat::EdgeList:
      out << "source,target,weight\n";
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (m(i, j) > threshold) {
            out << io::csv_field(labels[static_cast<std::size_t>(i)]) << ','
                << io::csv_field(labels[static_cast<std::size_t>(j)]) << ','
                << io::format_double(m(i, j)) << '\n';
          }
        }
      }
      break;
    case ExportFormat::GraphMl:
      if (p.labels != labels) {
        throw Error(ErrorKind::InvalidInput, "partition labels do not match the network");
      }
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
          << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
          << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
      for (Eigen::Index i = 0; i < n; ++i) {
        out << "    <node id=\"" << xml_escape(labels[static_cast<std::size_t>(i)])
            << "\"><data key=\"community\">" << p.community[static_cast<std::size_t>(i)]
            << "</data></node>\n";
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
          if (m(i, j) > threshold) {
            out << "    <edge source=\"" << xml_escape(labels[static_cast<std::size_t>(i)])
                << "\" target=\"" << xml_escape(labels[static_cast<std::size_t>(j)])
                << "\"><data key=\"weight\">" << io::format_double(m(i, j)) << "</data></edge>\n";
          }
        }
      }
      out << "  </graph>\n</graphml>\n";
      break;
    case ExportFormat::CsvMatrix:
      io::write_matrix_csv(out, labels, m);
      break;
  }
  return out.str();
}

void export_graph(const SimilarityLayer& s, const Partition& p, ExportFormat format,
                  const fs::path& path, double threshold) {
  io::write_file(path, render_graph(s, p, format, threshold));
}

void write_artifacts(const RunReport& report, const PipelineConfig& cfg) {
  const fs::path& dir = cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  io::write_file(dir / "report.json", report_to_json(report).dump(2) + "\n");

  {
    std::ostringstream out;
    out << "entity,status,layer\n";
    for (const auto& r : report.filter.removals) {
      out << io::csv_field(r.entity) << ',' << r.reason << ',' << io::csv_field(r.layer) << '\n';
    }
    for (const auto& e : report.entities) out << io::csv_field(e) << ",retained,\n";
    io::write_file(dir / "filter_log.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "layer,w_F,w_R\n";
    for (std::size_t l = 0; l < report.layer_names.size(); ++l) {
      out << io::csv_field(report.layer_names[l]) << ','
          << io::format_double(report.weights_frobenius[l]) << ','
          << io::format_double(report.weights_rowsum[l]) << '\n';
    }
    io::write_file(dir / "weights.csv", out.str());
  }
  {
    std::ostringstream out;
    io::write_matrix_csv(out, report.layer_names, report.rv.matrix());
    io::write_file(dir / "rv_matrix.csv", out.str());
  }
  {
    std::ostringstream out;
    io::write_matrix_csv(out, report.monoplex_dcor.names, report.monoplex_dcor.values);
    io::write_file(dir / "dcor_monoplex.csv", out.str());
  }
  if (!report.snf_layer_dcor.empty()) {
    std::ostringstream out;
    out << "layer,dcor\n";
    for (std::size_t l = 0; l < report.snf_layer_dcor.size(); ++l) {
      out << io::csv_field(report.layer_names[l]) << ','
          << io::format_double(report.snf_layer_dcor[l]) << '\n';
    }
    io::write_file(dir / "dcor_snf_layers.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "entity";
    for (const auto& r : report.methods) out << ',' << to_string(r.method);
    out << '\n';
    for (std::size_t i = 0; i < report.entities.size(); ++i) {
      out << io::csv_field(report.entities[i]);
      for (const auto& r : report.methods) out << ',' << r.partition.community[i];
      out << '\n';
    }
    io::write_file(dir / "partitions.csv", out.str());
  }
  for (const auto& r : report.methods) {
    const std::string stem = "monoplex_" + std::string(to_string(r.method));
    export_graph(r.monoplex, r.partition, ExportFormat::CsvMatrix, dir / (stem + ".csv"));
    for (ExportFormat f : cfg.exports) {
      if (f == ExportFormat::EdgeList) {
        export_graph(r.monoplex, r.partition, f, dir / (stem + ".edges.csv"), cfg.export_threshold);
      } else if (f == ExportFormat::GraphMl) {
        export_graph(r.monoplex, r.partition, f, dir / (stem + ".graphml"), cfg.export_threshold);
      }
    }
  }
}

}  // namespace multifuse

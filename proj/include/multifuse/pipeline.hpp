#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "multifuse/multiplex.hpp"
#include "multifuse/netanalysis.hpp"
#include "multifuse/sma.hpp"
#include "multifuse/snf.hpp"

namespace multifuse {

/// One layer of raw measurements: entities x sites, nonnegative.
struct AbundanceTable {
  std::string layer_name;
  Labels entity_ids;
  Labels site_ids;
  Eigen::MatrixXd values;
};

/// Reads one CSV per layer (first column entity id, header row site ids,
/// layer name = file stem) and aligns them on the union of entity ids in
/// order of first appearance. Entities missing from a file get a zero row.
std::vector<AbundanceTable> load_abundance_tables(const std::vector<std::filesystem::path>& paths);

struct FilterLog {
  struct Removal {
    std::string entity;
    std::string reason;  // "absent-everywhere" or "absent-in-layer"
    std::string layer;   // first layer with an all-zero row (pass 2 only)
  };

  std::size_t total = 0;
  std::size_t removed_absent_everywhere = 0;
  std::size_t removed_absent_in_layer = 0;
  std::vector<Removal> removals;

  std::size_t retained() const {
    return total - removed_absent_everywhere - removed_absent_in_layer;
  }
};

struct FilterResult {
  std::vector<AbundanceTable> tables;
  FilterLog log;
};

/// Pass 1 drops entities that are zero in every layer; pass 2 drops entities
/// with an all-zero row in at least one layer. Throws EmptyAfterFilter when
/// nothing is left.
FilterResult filter_entities(std::vector<AbundanceTable> tables);

enum class Method { Snf, SmaF, SmaR, SmaW };
enum class WeightsMode { Paired, Uniform, RvLeadingEigenvector, RvRowsum };
enum class ExportFormat { EdgeList, GraphMl, CsvMatrix };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(WeightsMode m) noexcept;
std::string_view to_string(ExportFormat f) noexcept;
Method parse_method(std::string_view s);
WeightsMode parse_weights_mode(std::string_view s);
ExportFormat parse_export_format(std::string_view s);

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output_dir = "multifuse-out";

  SimilarityKind similarity = SimilarityKind::Rbf;  // Rbf, Jaccard or Cosine
  std::optional<double> sigma;                      // empty: per-layer auto

  std::optional<int> snf_k;  // empty: max(1, round(n / 3))
  SnfConfig snf;
  BarycenterConfig frobenius = BarycenterConfig::defaults_for(BarycenterMetric::Frobenius);
  BarycenterConfig riemannian = BarycenterConfig::defaults_for(BarycenterMetric::Riemannian);
  BarycenterConfig wasserstein = BarycenterConfig::defaults_for(BarycenterMetric::Wasserstein);
  WeightsMode weights = WeightsMode::Paired;
  std::vector<Method> methods{Method::Snf, Method::SmaF, Method::SmaR, Method::SmaW};

  double resolution = 1.0;
  std::uint64_t seed = 0;

  std::vector<ExportFormat> exports{ExportFormat::EdgeList, ExportFormat::GraphMl};
  double export_threshold = 0.0;

  /// Relative paths in the document resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);
  void validate() const;
};

struct MethodReport {
  Method method;
  FusionResult fusion;
  SimilarityLayer monoplex;
  std::size_t clipped_entries = 0;
  double max_clip = 0.0;
  Partition partition;
};

struct RunReport {
  FilterLog filter;
  std::vector<std::string> layer_names;
  Labels entities;
  std::vector<double> sigmas;
  std::vector<int> layer_sites;
  int snf_k = 0;
  RvMatrix rv{Eigen::MatrixXd::Identity(1, 1)};
  std::vector<double> weights_frobenius;
  std::vector<double> weights_rowsum;
  std::vector<MethodReport> methods;
  CorrelationTable monoplex_dcor;
  /// dCor between the SNF monoplex and each layer; empty without SNF.
  std::vector<double> snf_layer_dcor;

  const MethodReport* find(Method m) const;
  bool all_converged() const;
};

/// Builds the multiplex from the filtered tables with the configured
/// similarity. Returns the per-layer RBF sigmas through `sigmas` when given.
Multiplex build_multiplex(const std::vector<AbundanceTable>& tables, const PipelineConfig& cfg,
                          std::vector<double>* sigmas = nullptr);

/// Runs every configured stage without touching the filesystem beyond reading
/// the inputs.
RunReport compute_pipeline(const PipelineConfig& cfg);

/// compute_pipeline, then write_artifacts into cfg.output_dir.
RunReport run_pipeline(const PipelineConfig& cfg);

nlohmann::ordered_json report_to_json(const RunReport& report);

/// Writes report.json and the CSV / graph artifacts in a fixed order.
void write_artifacts(const RunReport& report, const PipelineConfig& cfg);

std::string render_graph(const SimilarityLayer& s, const Partition& p, ExportFormat format,
                         double threshold = 0.0);
void export_graph(const SimilarityLayer& s, const Partition& p, ExportFormat format,
                  const std::filesystem::path& path, double threshold = 0.0);

}  // namespace multifuse

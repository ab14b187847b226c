#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "multifuse/io.hpp"
#include "multifuse/netanalysis.hpp"
#include "multifuse/pipeline.hpp"

namespace fs = std::filesystem;
using namespace multifuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix:
    case ErrorKind::DegenerateSpectrum:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

/// Prints a one-line summary per method and applies --strict.
int finish_run(const RunReport& report, const fs::path& out, bool strict) {
  for (const auto& m : report.methods) {
    std::cout << to_string(m.method) << ": iterations=" << m.fusion.iterations
              << " residual=" << io::format_double(m.fusion.residual)
              << " converged=" << (m.fusion.converged ? "yes" : "no")
              << " communities=" << m.partition.count() << '\n';
  }
  std::cout << "entities retained: " << report.filter.retained() << " of " << report.filter.total
            << "\nartifacts: " << out.string() << '\n';
  if (!report.all_converged()) {
    std::cerr << "warning: at least one method did not converge\n";
    if (strict) return kExitNumerical;
  }
  return kExitOk;
}

std::optional<double> parse_sigma(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  const double v = io::parse_double(s, "--sigma");
  return v;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multifuse: multiplex similarity network fusion and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "multifuse 1.0.0");

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline from a JSON config");
  std::string config_path;
  std::string run_out;
  bool run_strict = false;
  run->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  run->add_option("--out", run_out, "Override the output directory");
  run->add_flag("--strict", run_strict, "Exit with 3 when a solver does not converge");

  // fuse
  auto* fuse = app.add_subcommand("fuse", "Fuse abundance tables with one method");
  std::string method = "snf";
  std::vector<std::string> inputs;
  std::string sigma = "auto";
  std::optional<int> k;
  std::optional<double> epsilon;
  std::optional<int> max_iter;
  std::string weights = "paired";
  std::string fuse_out;
  bool fuse_strict = false;
  fuse->add_option("--method", method, "snf | sma-f | sma-r | sma-w")
      ->check(CLI::IsMember({"snf", "sma-f", "sma-r", "sma-w"}));
  fuse->add_option("--inputs", inputs, "One abundance CSV per layer")->required()->expected(2, -1);
  fuse->add_option("--sigma", sigma, "RBF scale, or 'auto' for the per-layer default");
  fuse->add_option("--k", k, "SNF neighbourhood size");
  fuse->add_option("--epsilon", epsilon, "SNF convergence tolerance");
  fuse->add_option("--max-iter", max_iter, "Iteration cap for the chosen solver");
  fuse->add_option("--weights", weights, "paired | uniform | rv-pc | rv-rowsum");
  fuse->add_option("--out", fuse_out, "Output directory")->required();
  fuse->add_flag("--strict", fuse_strict, "Exit with 3 when the solver does not converge");

  // dcor
  auto* dcor = app.add_subcommand("dcor", "Distance correlation of two matrix CSVs");
  std::string dcor_a, dcor_b;
  dcor->add_option("a", dcor_a, "First matrix CSV")->required();
  dcor->add_option("b", dcor_b, "Second matrix CSV")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Louvain communities of a matrix CSV");
  std::string cluster_in;
  double resolution = 1.0;
  std::uint64_t seed = 0;
  std::string cluster_out;
  cluster->add_option("matrix", cluster_in, "Matrix CSV")->required();
  cluster->add_option("--resolution", resolution, "Modularity resolution");
  cluster->add_option("--seed", seed, "Sweep-order seed");
  cluster->add_option("--out", cluster_out, "Write the partition CSV here instead of stdout");

  // export
  auto* exp = app.add_subcommand("export", "Convert a matrix CSV to a graph file");
  std::string export_in;
  std::string format;
  std::string export_out;
  double threshold = 0.0;
  double export_resolution = 1.0;
  std::uint64_t export_seed = 0;
  exp->add_option("matrix", export_in, "Matrix CSV")->required();
  exp->add_option("--format", format, "edge-list | graphml | csv-matrix")
      ->required()
      ->check(CLI::IsMember({"edge-list", "graphml", "csv-matrix"}));
  exp->add_option("--out", export_out, "Output file (stdout when omitted)");
  exp->add_option("--threshold", threshold, "Edge-list: keep weights above this");
  exp->add_option("--resolution", export_resolution, "GraphML: Louvain resolution");
  exp->add_option("--seed", export_seed, "GraphML: Louvain seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) {
      PipelineConfig cfg = PipelineConfig::load(config_path);
      if (!run_out.empty()) cfg.output_dir = run_out;
      cfg.validate();
      const RunReport report = run_pipeline(cfg);
      return finish_run(report, cfg.output_dir, run_strict);
    }

    if (*fuse) {
      PipelineConfig cfg;
      for (const auto& p : inputs) cfg.inputs.emplace_back(p);
      cfg.output_dir = fuse_out;
      cfg.sigma = parse_sigma(sigma);
      cfg.methods = {parse_method(method)};
      cfg.weights = parse_weights_mode(weights);
      cfg.snf_k = k;
      if (epsilon) cfg.snf.epsilon = *epsilon;
      if (max_iter) {
        cfg.snf.max_iter = *max_iter;
        cfg.riemannian.max_iter = *max_iter;
        cfg.wasserstein.max_iter = *max_iter;
      }
      cfg.validate();
      const RunReport report = run_pipeline(cfg);
      return finish_run(report, cfg.output_dir, fuse_strict);
    }

    if (*dcor) {
      const SimilarityLayer a = io::read_matrix_csv(dcor_a);
      const SimilarityLayer b = io::read_matrix_csv(dcor_b);
      std::cout << io::format_double(distance_correlation(a, b)) << '\n';
      return kExitOk;
    }

    if (*cluster) {
      if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
      const SimilarityLayer s = io::read_matrix_csv(cluster_in);
      const Partition p = louvain_communities(s, resolution, seed);
      std::ofstream file;
      std::ostream& out = open_output(cluster_out, file);
      out << "entity,community\n";
      for (std::size_t i = 0; i < p.labels.size(); ++i) {
        out << io::csv_field(p.labels[i]) << ',' << p.community[i] << '\n';
      }
      std::cerr << "communities=" << p.count() << " modularity=" << io::format_double(p.modularity)
                << '\n';
      return kExitOk;
    }

    if (*exp) {
      const SimilarityLayer s = io::read_matrix_csv(export_in);
      const ExportFormat f = parse_export_format(format);
      Partition p;
      if (f == ExportFormat::GraphMl) {
        p = louvain_communities(s, export_resolution, export_seed);
      } else {
        p = Partition{s.labels(), std::vector<int>(static_cast<std::size_t>(s.size()), 0), 0.0};
      }
      const std::string text = render_graph(s, p, f, threshold);
      if (export_out.empty() || export_out == "-") {
        std::cout << text;
      } else {
        io::write_file(export_out, text);
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

// phdim: command-line front end for the sampling / persistence / scaling experiments.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "phdim/errors.hpp"
#include "phdim/experiment.hpp"
#include "phdim/experiment_config.hpp"
#include "phdim/selftest.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> max_simplices;
  std::optional<std::string> hom_dims;
  std::optional<std::string> shape;
  std::optional<std::string> n_schedule;
  std::optional<std::size_t> trials;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--max-simplices", o.max_simplices, "simplex budget per cell");
  sub->add_option("--hom-dims", o.hom_dims, "comma list, e.g. 0,1");
  sub->add_option("--shape", o.shape, "shape name");
  sub->add_option("--n", o.n_schedule, "comma list of sample sizes");
  sub->add_option("--trials", o.trials, "trials per sample size");
}

phdim::ExperimentConfig resolve(const Overrides& o) {
  phdim::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = phdim::load_config(o.config);
  phdim::apply_env_overrides(cfg);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.max_simplices) cfg.caps.max_simplices = *o.max_simplices;
  if (o.hom_dims) cfg.hom_dims = phdim::parse_int_list(*o.hom_dims);
  if (o.shape) cfg.shape.variant = phdim::shape_from_name(*o.shape);
  if (o.n_schedule) cfg.n_schedule = phdim::parse_size_list(*o.n_schedule);
  if (o.trials) cfg.trials = *o.trials;
  cfg.validate();
  return cfg;
}

void summarize(const phdim::RunReport& r) {
  std::cout << "wrote " << r.files.size() << " files to " << r.output_dir << " (" << r.cells_computed
            << " cells computed, " << r.cells_reused << " reused)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"persistent homology dimension experiments"};
  app.require_subcommand(1);
  Overrides o;
  auto* sample = app.add_subcommand("sample", "write sampled point clouds");
  auto* dimension = app.add_subcommand("dimension", "scaling series and slope fits");
  auto* cdf = app.add_subcommand("cdf", "rescaled interval-length CDFs and KS matrices");
  auto* arrowhead = app.add_subcommand("arrowhead", "arrowhead curve scaling regimes");
  auto* selftest = app.add_subcommand("selftest", "oracle, closed-form and synthetic checks");
  for (auto* s : {sample, dimension, cdf, arrowhead}) add_common(s, o);
  auto* print_config = app.add_subcommand("config", "print the resolved config as JSON");
  add_common(print_config, o);

  phdim::SelftestOptions st;
  selftest->add_option("--seed", st.seed, "seed");
  selftest->add_flag("--perturb-engine", st.perturb_engine)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      return phdim::print_selftest(std::cout, phdim::run_selftest(st)) ? 0 : 1;
    }
    const auto cfg = resolve(o);
    if (print_config->parsed()) {
      std::cout << phdim::config_to_json(cfg) << '\n';
    } else if (sample->parsed()) {
      summarize(phdim::cmd_sample(cfg));
    } else if (dimension->parsed()) {
      summarize(phdim::cmd_dimension(cfg));
    } else if (cdf->parsed()) {
      summarize(phdim::cmd_cdf(cfg));
    } else if (arrowhead->parsed()) {
      summarize(phdim::cmd_arrowhead(cfg));
    }
  } catch (const phdim::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const phdim::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const phdim::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

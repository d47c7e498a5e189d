#include "pnpcli/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnp/kernel.hpp"
#include "pnp/pnm.hpp"
#include "pnp/rng.hpp"

namespace pnpcli {

namespace fs = std::filesystem;

pnp::AnalyticPrior parse_prior(const ConfigSection& sec) {
  const std::string kind = sec.get_string("kind");
  std::vector<pnp::PriorComponent> comps;
  for (const ConfigEntry* e : sec.all("component")) {
    std::istringstream in(e->value);
    pnp::PriorComponent c;
    if (!(in >> c.weight >> c.mean >> c.variance)) {
      throw ConfigError("component needs `weight mean variance`", e->line,
                        sec.name + ".component");
    }
    std::string extra;
    if (in >> extra) {
      throw ConfigError("trailing tokens after `weight mean variance`", e->line,
                        sec.name + ".component");
    }
    comps.push_back(c);
  }
  if (comps.empty()) {
    throw ConfigError("at least one `component` line required", sec.line, sec.name);
  }
  if (kind == "gaussian") {
    if (comps.size() != 1) {
      throw ConfigError("kind gaussian takes exactly one component", sec.line, sec.name);
    }
    if (comps[0].weight != 1.0) comps[0].weight = 1.0;
    return pnp::AnalyticPrior::gaussian(comps[0].mean, comps[0].variance);
  }
  if (kind == "gmm") return pnp::AnalyticPrior::mixture(comps);
  throw ConfigError("kind must be gaussian or gmm, got `" + kind + "`", sec.line,
                    sec.name + ".kind");
}

namespace {

pnp::SolverConfig parse_solver(const Config& cfg) {
  pnp::SolverConfig sc;
  const ConfigSection* sec = cfg.find("solver");
  if (!sec) return sc;
  sc.gamma = sec->get_double_or("gamma", sc.gamma);
  sc.iterations = sec->get_int_or("iterations", 0);

  const std::string mode = sec->get_string_or("mode", "theory");
  if (mode == "theory") {
    sc.mode = pnp::SolverConfig::Mode::theory;
  } else if (mode == "experiment") {
    sc.mode = pnp::SolverConfig::Mode::experiment;
  } else {
    throw ConfigError("mode must be theory or experiment, got `" + mode + "`",
                      sec->line, "solver.mode");
  }

  const std::string sched = sec->get_string_or("schedule", "constant");
  if (sched == "constant") {
    sc.schedule = pnp::SigmaSchedule::constant_level(sec->get_double_or("sigma", 0.5));
  } else if (sched == "log_decay") {
    sc.schedule = pnp::SigmaSchedule::log_decay(sec->get_double_or("sigma_start", 0.1),
                                                sec->get_double_or("sigma_end", 0.01));
  } else {
    throw ConfigError("schedule must be constant or log_decay, got `" + sched + "`",
                      sec->line, "solver.schedule");
  }

  const std::string prox = sec->get_string_or("prox", "closed_form");
  if (prox == "closed_form") {
    sc.prox.method = pnp::ProxSolverConfig::Method::closed_form_fft;
  } else if (prox == "cg") {
    sc.prox.method = pnp::ProxSolverConfig::Method::conjugate_gradient;
  } else {
    throw ConfigError("prox must be closed_form or cg, got `" + prox + "`", sec->line,
                      "solver.prox");
  }
  sc.prox.cg_tol = sec->get_double_or("cg_tol", sc.prox.cg_tol);
  sc.prox.cg_max_iter = sec->get_int_or("cg_max_iter", sc.prox.cg_max_iter);
  return sc;
}

pnp::DeltaSchedule parse_delta(const ConfigSection& sec) {
  const std::string kind = sec.get_string("kind");
  const double c = sec.get_double_or("c", 1.0);
  if (kind == "constant") return pnp::DeltaSchedule::constant(c);
  const double p = sec.get_double("p");
  if (kind == "summable") return pnp::DeltaSchedule::summable(c, p);
  if (kind == "non_summable") return pnp::DeltaSchedule::non_summable(c, p);
  throw ConfigError("kind must be summable, non_summable or constant, got `" + kind + "`",
                    sec.line, "delta.kind");
}

std::string read_whole_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

ExperimentSpec load_experiment(const std::string& path) {
  Config cfg = Config::parse_file(path);
  const fs::path base = fs::path(path).parent_path();
  ExperimentSpec spec;
  spec.config_text = read_whole_file(path);

  if (const ConfigSection* p = cfg.find("problem")) {
    spec.image_path = p->get_string_or("image", "");
    spec.synthetic = p->get_bool_or("synthetic", spec.image_path.empty());
    if (spec.synthetic && !spec.image_path.empty()) {
      throw ConfigError("synthetic = true conflicts with image", p->line, "problem");
    }
    if (!spec.synthetic && spec.image_path.empty()) {
      throw ConfigError("synthetic = false requires image", p->line, "problem");
    }
    spec.height = p->get_int_or("height", spec.height);
    spec.width = p->get_int_or("width", spec.width);
    spec.channels = p->get_int_or("channels", spec.channels);
    if (spec.height <= 0 || spec.width <= 0 || spec.channels <= 0) {
      throw ConfigError("height, width, channels must be positive", p->line, "problem");
    }
    spec.noise_sigma = p->get_double_or("noise_sigma", 0.0);
    if (spec.noise_sigma < 0.0) {
      throw ConfigError("noise_sigma must be nonnegative", p->line, "problem.noise_sigma");
    }
    const long long seed = p->get_int_or("seed", 1);
    spec.seed = static_cast<std::uint64_t>(seed);
    if (!spec.image_path.empty()) {
      spec.image_path = (base / spec.image_path).string();
    }
  }

  if (const ConfigSection* m = cfg.find("measurement")) {
    const std::string kernel = m->get_string_or("kernel", "dirac");
    if (kernel == "dirac") {
      spec.model.kernel = pnp::dirac_kernel();
    } else {
      spec.model.kernel = pnp::load_kernel((base / kernel).string());
    }
    spec.model.scale = m->get_int_or("scale", 1);
    if (spec.model.scale < 1) {
      throw ConfigError("scale must be >= 1", m->line, "measurement.scale");
    }
  }
  spec.model.noise_sigma = spec.noise_sigma;

  spec.target = parse_prior(cfg.require("prior_target"));
  if (const ConfigSection* pm = cfg.find("prior_mismatched")) {
    spec.mismatched = parse_prior(*pm);
  }

  if (const ConfigSection* a = cfg.find("adaptation")) {
    if (!spec.mismatched) {
      throw ConfigError("[adaptation] requires [prior_mismatched] as the source prior",
                        a->line, "adaptation");
    }
    spec.adaptation_alphas = a->get_double_list("alphas");
    pnp::AdaptationPath path{*spec.mismatched, spec.target, *spec.adaptation_alphas};
    path.validate();
  }

  if (const ConfigSection* d = cfg.find("delta")) {
    if (spec.adaptation_alphas) {
      throw ConfigError("[delta] and [adaptation] cannot be combined", d->line, "delta");
    }
    spec.delta = parse_delta(*d);
  }

  spec.solver = parse_solver(cfg);

  if (const ConfigSection* o = cfg.find("output")) {
    spec.out_dir = o->get_string_or("dir", "");
    if (!spec.out_dir.empty()) {
      spec.out_dir = (base / spec.out_dir).lexically_normal().string();
    }
  }
  return spec;
}

namespace {

// Ancestral sampling from the analytic prior: pick a component by CDF scan,
// then draw from its Gaussian.
pnp::ImageBuffer sample_from_prior(const pnp::AnalyticPrior& prior, int h, int w, int c,
                                   pnp::Rng& rng) {
  pnp::ImageBuffer img(h, w, c);
  for (double& v : img.data) {
    const double u = rng.uniform01();
    double acc = 0.0;
    const pnp::PriorComponent* pick = &prior.components.back();
    for (const pnp::PriorComponent& comp : prior.components) {
      acc += comp.weight;
      if (u <= acc) {
        pick = &comp;
        break;
      }
    }
    v = pick->mean + std::sqrt(pick->variance) * rng.normal();
  }
  return img;
}

}  // namespace

Problem build_problem(const ExperimentSpec& spec, std::uint64_t seed) {
  Problem prob;
  prob.model = spec.model;
  prob.target = pnp::Denoiser{spec.target, pnp::Denoiser::Role::target};
  if (spec.mismatched) {
    prob.mismatched = pnp::Denoiser{*spec.mismatched, pnp::Denoiser::Role::mismatched};
  }

  pnp::ImageBuffer gt;
  if (spec.synthetic) {
    pnp::Rng rng(pnp::derive_seed(seed, 0));
    gt = sample_from_prior(spec.target, spec.height, spec.width, spec.channels, rng);
  } else {
    gt = pnp::read_image(spec.image_path);
  }

  pnp::ImageBuffer clean = pnp::forward(prob.model, gt);
  if (spec.noise_sigma > 0.0) {
    pnp::Rng noise_rng(pnp::derive_seed(seed, 1));
    pnp::ImageBuffer e = pnp::gaussian_noise(clean.height, clean.width, clean.channels,
                                             spec.noise_sigma, noise_rng);
    prob.y = pnp::add(clean, e);
  } else {
    prob.y = std::move(clean);
  }
  prob.ground_truth = std::move(gt);
  return prob;
}

std::string resolve_out_dir(const std::string& flag_value, const ExperimentSpec* spec) {
  if (!flag_value.empty()) return flag_value;
  if (spec && !spec->out_dir.empty()) return spec->out_dir;
  if (const char* env = std::getenv("PNPADMM_OUT_DIR"); env && *env) return env;
  return "./out";
}

}  // namespace pnpcli

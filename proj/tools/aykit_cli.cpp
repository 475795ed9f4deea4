// aykit command-line entry point.
//
// Exit codes: 0 success, 1 I/O error, 2 usage/domain/validation error,
// 3 verification inconclusive or out of tolerance.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "aykit/embed.hpp"
#include "aykit/error.hpp"
#include "aykit/io.hpp"
#include "aykit/mc.hpp"
#include "aykit/measure.hpp"
#include "aykit/path.hpp"
#include "aykit/sde.hpp"
#include "aykit/stats.hpp"
#include "aykit/transform.hpp"

using namespace aykit;

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kUsage = 2;
constexpr int kOutOfTolerance = 3;

struct GenArgs {
  std::string gen = "exp";
  double dt = 1e-3;
  double horizon = 1.0;
  double sigma = 1.0;
  std::optional<double> start;
  std::uint64_t seed = 0;
  double upper = 4.0;
  double floor = 0.05;
  std::size_t paths = 1000;
  unsigned threads = 1;
  double censor_budget = 0.002;
  double max_extension = 1000.0;
  bool no_extend = false;
  bool grid_max = false;
  std::string out;
  std::string dump_samples;
  std::string plot_data;
};

void add_gen_options(CLI::App* app, GenArgs& g, bool with_kind) {
  if (with_kind) app->add_option("--gen", g.gen, "generator: exp, brownian, bm_stopped_at_0, exit_interval, floored_gbm");
  app->add_option("--dt", g.dt, "grid step");
  app->add_option("--horizon", g.horizon, "base horizon (extended while the censoring estimate is above budget)");
  app->add_option("--sigma", g.sigma, "volatility");
  app->add_option("--start", g.start, "starting value");
  app->add_option("--seed", g.seed, "base seed");
  app->add_option("--upper", g.upper, "upper barrier of exit_interval");
  app->add_option("--floor", g.floor, "floor level of floored_gbm");
  app->add_option("--paths", g.paths, "number of paths");
  app->add_option("--threads", g.threads, "worker threads (results do not depend on it)");
  app->add_option("--censor-budget", g.censor_budget, "censoring budget");
  app->add_option("--max-extension", g.max_extension, "horizon extension cap, as a multiple of --horizon");
  app->add_flag("--no-extend", g.no_extend, "stop every path at the base horizon");
  app->add_flag("--grid-max", g.grid_max, "use the grid maximum only, without the bridge refinement");
  app->add_option("--out", g.out, "report JSON (stdout when omitted)");
  app->add_option("--dump-samples", g.dump_samples, "CSV of the sample behind the KS statistic");
  app->add_option("--emit-plot-data", g.plot_data, "CSV of empirical CDF against target");
}

GenSpec make_spec(const GenArgs& g, std::optional<GenKind> forced = std::nullopt) {
  GenSpec s;
  s.kind = forced ? *forced : gen_kind_from_string(g.gen);
  s.dt = g.dt;
  s.horizon = g.horizon;
  s.volatility = g.sigma;
  s.start = g.start ? *g.start : (s.kind == GenKind::brownian ? 0.0 : 1.0);
  s.base_seed = g.seed;
  s.upper = g.upper;
  s.floor = g.floor;
  s.validate();
  return s;
}

RunOptions make_run(const GenArgs& g) {
  RunOptions r;
  r.threads = std::max(1u, g.threads);
  r.censor_budget = g.censor_budget;
  r.auto_extend = !g.no_extend;
  r.bridge_max = !g.grid_max;
  r.max_extension = g.max_extension;
  return r;
}

void emit(const std::string& file, const std::string& text) {
  if (file.empty() || file == "-") std::cout << text;
  else write_text_file(file, text);
}

std::string samples_csv(const std::vector<double>& v) {
  std::string out = "sample\n";
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out += buf;
  }
  return out;
}

std::string plot_csv(const McReport& rep) {
  std::string out = "x,empirical,target\n";
  if (!rep.target || rep.samples.empty()) return out;
  const Ecdf e(rep.samples);
  const auto& s = e.sorted();
  const std::size_t points = std::min<std::size_t>(s.size(), 2000);
  char buf[100];
  for (std::size_t k = 0; k < points; ++k) {
    const double x = s[(s.size() - 1) * k / std::max<std::size_t>(points - 1, 1)];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, e(x), rep.target->at(x));
    out += buf;
  }
  return out;
}

// Writes the report with its config and provenance; returns the exit code.
int finish(const McReport& rep, const GenArgs& g, Json config, bool pass) {
  Json j = to_json(rep);
  config["paths"] = g.paths;
  config["censor_budget"] = g.censor_budget;
  config["auto_extend"] = !g.no_extend;
  config["max_extension"] = g.max_extension;
  config["grid_max"] = g.grid_max;
  j["config"] = config;
  j["provenance"]["config_hash"] = hex64(fnv1a(dump_json(config)));
  j["pass"] = pass && !rep.inconclusive;
  emit(g.out, dump_json(j));
  if (!g.dump_samples.empty()) write_text_file(g.dump_samples, samples_csv(rep.samples));
  if (!g.plot_data.empty()) write_text_file(g.plot_data, plot_csv(rep));
  return pass && !rep.inconclusive ? kOk : kOutOfTolerance;
}

Json segments_json(const QuantileProfile& q) {
  Json segs = Json::array();
  for (const auto& s : q.segments()) segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"a", s.a}, {"b", s.b}, {"c", s.c}});
  return {{"type", "quantile_profile"}, {"segments", segs}};
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw ValidationError(std::string("--") + name + " is required for this operation");
  return *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Azema-Yor transforms, drawdown equations and Monte Carlo verification"};
  app.require_subcommand(1);

  // measure
  std::string m_spec, m_op = "mean";
  std::optional<double> m_x, m_lambda, m_strike;
  auto* c_measure = app.add_subcommand("measure", "evaluate a measure functional");
  c_measure->add_option("--spec", m_spec, "measure JSON")->required();
  c_measure->add_option("--op", m_op,
                        "tail, tail_open, cdf, tail_quantile, avar, avar_via_calls, integrated_quantile, call, "
                        "barycentre, mean, hl_tail, hl_tail_dual, describe");
  c_measure->add_option("--x", m_x, "point");
  c_measure->add_option("--lambda", m_lambda, "level in (0,1]");
  c_measure->add_option("--strike", m_strike, "call strike");

  // transform
  std::string t_spec, t_op = "hl", t_out, t_profile, t_path;
  auto* c_transform = app.add_subcommand("transform", "measure transforms and Azema-Yor path transforms");
  c_transform->add_option("--spec", t_spec, "measure JSON");
  c_transform->add_option("--op", t_op, "hl, delta, envelope, profile, ay, ay_integral, ay_inverse");
  c_transform->add_option("--profile", t_profile, "profile JSON (ay operations)");
  c_transform->add_option("--path", t_path, "path CSV (ay operations)");
  c_transform->add_option("--out", t_out, "output file (stdout when omitted)");

  // solve
  std::string s_eq = "drawdown", s_coef, s_driver, s_out, s_event, s_method = "closed";
  std::optional<double> s_astar;
  auto* c_solve = app.add_subcommand("solve", "solve the Bachelier or drawdown equation on a driver path");
  c_solve->add_option("--eq", s_eq, "bachelier or drawdown")->check(CLI::IsMember({"bachelier", "drawdown"}));
  c_solve->add_option("--coef", s_coef, "coefficient JSON (phi for bachelier, w for drawdown)")->required();
  c_solve->add_option("--driver", s_driver, "driver path CSV")->required();
  c_solve->add_option("--a-star", s_astar, "initial value of the solution")->required();
  c_solve->add_option("--method", s_method, "closed or euler")->check(CLI::IsMember({"closed", "euler"}));
  c_solve->add_option("--out", s_out, "solution CSV (stdout when omitted)");
  c_solve->add_option("--event", s_event, "stop event JSON");

  // simulate
  GenArgs sim;
  sim.paths = 1;
  std::size_t sim_index = 0;
  auto* c_sim = app.add_subcommand("simulate", "write generated paths as CSV");
  add_gen_options(c_sim, sim, true);
  c_sim->add_option("--index", sim_index, "first path index");

  // verify
  GenArgs ver;
  std::string v_suite = "uniform-law", v_drawdown;
  std::vector<double> v_times{1.0, 4.0, 9.0};
  std::optional<double> v_astar, v_tol;
  auto* c_verify = app.add_subcommand("verify", "Monte Carlo check of a distributional law");
  add_gen_options(c_verify, ver, true);
  c_verify->add_option("--suite", v_suite, "uniform-law, last-passage, breach-law")
      ->check(CLI::IsMember({"uniform-law", "last-passage", "breach-law"}));
  c_verify->add_option("--t-list", v_times, "last-passage times")->delimiter(',');
  c_verify->add_option("--drawdown", v_drawdown, "drawdown function JSON (breach-law)");
  c_verify->add_option("--a-star", v_astar, "initial value of the drawdown solution (breach-law)");
  c_verify->add_option("--tol", v_tol, "tolerance on the reported statistic");

  // embed
  GenArgs emb;
  emb.horizon = 50.0;
  emb.sigma = 1.0;
  std::string e_measure;
  double e_tol = 0.02;
  auto* c_embed = app.add_subcommand("embed", "Azema-Yor embedding of a centered measure");
  add_gen_options(c_embed, emb, false);
  c_embed->add_option("--measure", e_measure, "measure JSON")->required();
  c_embed->add_option("--tol", e_tol, "tolerance on tv and ks");

  // dominate
  GenArgs dom;
  dom.horizon = 50.0;
  std::string d_measure, d_rule = "exit_interval";
  double d_time = 0.0, d_tv = 0.02;
  std::size_t d_levels = 100;
  auto* c_dom = app.add_subcommand("dominate", "maximum of an alternative embedding against the HL bound");
  add_gen_options(c_dom, dom, false);
  c_dom->add_option("--measure", d_measure, "measure JSON")->required();
  c_dom->add_option("--rule", d_rule, "exit_interval, randomized_exit, fixed_time, ay");
  c_dom->add_option("--time", d_time, "stopping time of fixed_time");
  c_dom->add_option("--tv-budget", d_tv, "TV budget for the rule to count as an embedding");
  c_dom->add_option("--levels", d_levels, "number of grid levels");

  // floor
  GenArgs flo;
  flo.horizon = 1.0;
  std::string f_floor, f_alt = "noisy_terminal";
  double f_noise = 0.5;
  std::vector<double> f_caps{0.5, 1.0, 2.0, 4.0};
  auto* c_floor = app.add_subcommand("floor", "floor domination of the Azema-Yor martingale");
  add_gen_options(c_floor, flo, false);
  c_floor->add_option("--floor-spec", f_floor, "floor JSON")->required();
  c_floor->add_option("--alt", f_alt, "noisy_terminal or driver");
  c_floor->add_option("--noise", f_noise, "noise of noisy_terminal");
  c_floor->add_option("--caps", f_caps, "caps c of min(x, c)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_measure) {
      const auto mu = measure_from_json(read_json_file(m_spec));
      double r = 0.0;
      if (m_op == "describe") {
        Json j = measure_to_json(mu);
        j["mean"] = mu.mean();
        j["lower"] = mu.lower();
        j["upper"] = mu.upper();
        j["hl_barrier"] = mu.hl_barrier();
        std::cout << dump_json(j);
        return kOk;
      }
      if (m_op == "tail") r = mu.tail(need(m_x, "x"));
      else if (m_op == "tail_open") r = mu.tail_open(need(m_x, "x"));
      else if (m_op == "cdf") r = mu.cdf(need(m_x, "x"));
      else if (m_op == "tail_quantile") r = mu.tail_quantile(need(m_lambda, "lambda"));
      else if (m_op == "avar") r = mu.avar(need(m_lambda, "lambda"));
      else if (m_op == "avar_via_calls") r = mu.avar_via_calls(need(m_lambda, "lambda"));
      else if (m_op == "integrated_quantile") r = mu.integrated_quantile(need(m_lambda, "lambda"));
      else if (m_op == "call") r = mu.call(need(m_strike ? m_strike : m_x, "strike"));
      else if (m_op == "barycentre") r = mu.barycentre(need(m_x, "x"));
      else if (m_op == "mean") r = mu.mean();
      else if (m_op == "hl_tail") r = hl_transform(mu).tail(need(m_x, "x"));
      else if (m_op == "hl_tail_dual") r = hl_tail_dual(mu, need(m_x, "x"));
      else throw ValidationError("unknown --op '" + m_op + "'");
      std::cout << format_scalar(r) << "\n";
      return kOk;
    }

    if (*c_transform) {
      if (t_op == "ay" || t_op == "ay_integral" || t_op == "ay_inverse") {
        if (t_profile.empty() || t_path.empty()) throw ValidationError("--profile and --path are required");
        const auto prof = profile_from_json(read_json_file(t_profile));
        const Path p = read_path_csv(t_path);
        const Path out = t_op == "ay" ? ay_closed_form(p, *prof)
                         : t_op == "ay_integral" ? ay_integral_form(p, *prof)
                                                 : ay_inverse(p, prof);
        emit(t_out, path_csv(out));
        return kOk;
      }
      if (t_spec.empty()) throw ValidationError("--spec is required");
      const auto mu = measure_from_json(read_json_file(t_spec));
      Json j;
      if (t_op == "hl") j = segments_json(hl_transform(mu));
      else if (t_op == "delta") j = measure_to_json(delta_operator(mu));
      else if (t_op == "envelope") {
        Json v = Json::array();
        for (const auto& c : concave_envelope(QuantileProfile::from_measure(mu)).vertices())
          v.push_back({{"lambda", c.lambda}, {"g", c.g}});
        j = {{"type", "concave_envelope"}, {"vertices", v}};
      } else if (t_op == "profile") j = profile_to_json(*profile_from_measure(mu));
      else throw ValidationError("unknown --op '" + t_op + "'");
      emit(t_out, dump_json(j));
      return kOk;
    }

    if (*c_solve) {
      const Json coef = read_json_file(s_coef);
      const Path x = read_path_csv(s_driver);
      Json event;
      Path y = x;
      if (s_eq == "bachelier") {
        const auto phi = coefficient_from_json(coef);
        if (s_method == "closed") {
          auto sol = solve_bachelier_closed(x, phi, *s_astar);
          y = sol.path;
          event = to_json(sol.event);
        } else {
          y = solve_bachelier_euler(x, phi, *s_astar);
        }
      } else {
        const auto w = drawdown_from_json(coef);
        if (s_method == "closed") {
          auto sol = solve_drawdown_closed(x, w, *s_astar);
          y = sol.path;
          event = to_json(sol.event);
          event["undershoot"] = sol.undershoot;
        } else {
          y = solve_drawdown_euler(x, w, *s_astar);
        }
      }
      emit(s_out, path_csv(y));
      if (!s_event.empty()) write_text_file(s_event, dump_json(event.is_null() ? Json::object() : event));
      return kOk;
    }

    if (*c_sim) {
      const GenSpec spec = make_spec(sim);
      if (sim.paths <= 1) {
        const auto g = generate(spec, sim_index);
        emit(sim.out, path_csv(g.path));
        return kOk;
      }
      if (sim.out.empty()) throw ValidationError("--out is required with more than one path");
      for (std::size_t k = 0; k < sim.paths; ++k) {
        const auto g = generate(spec, sim_index + k);
        write_text_file(sim.out + "." + std::to_string(sim_index + k) + ".csv", path_csv(g.path));
      }
      return kOk;
    }

    if (*c_verify) {
      Json config = {{"command", "verify"}, {"suite", v_suite}};
      McReport rep;
      bool pass = true;
      if (v_suite == "uniform-law") {
        const GenSpec spec = make_spec(ver);
        rep = uniform_law_report(spec, ver.paths, make_run(ver));
        pass = *rep.ks_stat < v_tol.value_or(0.01);
      } else if (v_suite == "last-passage") {
        const GenSpec spec = make_spec(ver, GenKind::exp_martingale);
        rep = last_passage_report(spec, ver.paths, v_times, make_run(ver));
        pass = rep.stats.at("max_abs_error") < v_tol.value_or(0.01);
        config["t_list"] = v_times;
      } else {
        const GenSpec spec = make_spec(ver);
        if (v_drawdown.empty()) throw ValidationError("--drawdown is required for breach-law");
        const Json wj = read_json_file(v_drawdown);
        const auto w = drawdown_from_json(wj);
        rep = breach_law_report(spec, w, need(v_astar, "a-star"), ver.paths, make_run(ver));
        pass = *rep.ks_stat < v_tol.value_or(0.02);
        config["drawdown"] = wj;
        config["a_star"] = *v_astar;
      }
      return finish(rep, ver, config, pass);
    }

    if (*c_embed) {
      const Json mj = read_json_file(e_measure);
      const auto mu = measure_from_json(mj);
      EmbedOptions opt;
      opt.run = make_run(emb);
      opt.tv_budget = e_tol;
      const auto rep = embed_report(mu, make_spec(emb, GenKind::brownian), emb.paths, opt);
      const bool pass = *rep.tv_stat < e_tol && *rep.ks_stat < e_tol;
      return finish(rep, emb, {{"command", "embed"}, {"measure", mj}, {"tol", e_tol}}, pass);
    }

    if (*c_dom) {
      const Json mj = read_json_file(d_measure);
      const auto mu = measure_from_json(mj);
      EmbedOptions opt;
      opt.run = make_run(dom);
      opt.tv_budget = d_tv;
      const auto rule = AltRule::from_string(d_rule, d_time);
      const auto rep = dominance_report(rule, mu, make_spec(dom, GenKind::brownian), dom.paths, opt, d_levels);
      const bool pass = rep.stats.at("dominated") > 0.5 && rep.stats.at("ay_attains") > 0.5;
      return finish(rep, dom,
                    {{"command", "dominate"}, {"measure", mj}, {"rule", d_rule}, {"time", d_time}, {"levels", d_levels}},
                    pass);
    }

    if (*c_floor) {
      const Json fj = read_json_file(f_floor);
      const auto g = floor_from_json(fj);
      const auto alt = FloorAlternative::from_string(f_alt, f_noise);
      const auto rep = floor_report(g, make_spec(flo, GenKind::exp_martingale), flo.paths, alt, f_caps, make_run(flo));
      const bool pass = rep.stats.at("violations") == 0.0 && rep.stats.at("concave_order_holds") > 0.5;
      return finish(rep, flo,
                    {{"command", "floor"}, {"floor", fj}, {"alt", f_alt}, {"noise", f_noise}, {"caps", f_caps}}, pass);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

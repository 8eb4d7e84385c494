// nrcalc — exact arithmetic for normal reduction numbers of cone-like
// surface singularities.
//
// Subcommands run one family instance end to end (closure filtration,
// q-sequence, bounds, cycle checks) and print a deterministic report table;
// `accept` runs the release battery.  All randomness flows from --seed, so
// identical (config, seed) pairs give byte-identical reports.  Exit codes:
// 0 ok, 1 failed checks or failed acceptance, 2 usage, 3 internal error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrcalc/acceptance.hpp"
#include "nrcalc/drivers.hpp"
#include "nrcalc/errors.hpp"
#include "nrcalc/report.hpp"
#include "nrcalc/version.hpp"

namespace {

using nrcalc::InputError;

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file " + path + ": " + e.what());
  }
  if (!cfg.is_object())
    throw InputError("config file " + path + " must contain a JSON object");
  static const std::set<std::string> known = {
      "d",    "r",    "g",    "b",   "degrees", "field", "nmax",
      "umax", "seed", "json", "csv", "file",    "only"};
  for (const auto& [key, value] : cfg.items())
    if (!known.count(key))
      throw InputError("config file " + path + ": unknown key \"" + key + "\"");
  return cfg;
}

// Flag-wins merge: a value is taken from the command line when the flag was
// given, else from the config file, else reported absent.
struct Merge {
  const nlohmann::json& cfg;

  std::optional<long> num(const CLI::App* scope, const std::string& flag,
                          long cli_value, const std::string& key) const {
    if (scope->count(flag)) return cli_value;
    auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    if (!it->is_number_integer())
      throw InputError("config key \"" + key + "\" must be an integer");
    return it->get<long>();
  }

  std::optional<std::string> str(const CLI::App* scope, const std::string& flag,
                                 const std::string& cli_value,
                                 const std::string& key) const {
    if (scope->count(flag)) return cli_value;
    auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    if (!it->is_string())
      throw InputError("config key \"" + key + "\" must be a string");
    return it->get<std::string>();
  }

  std::optional<std::vector<int>> nums(const CLI::App* scope,
                                       const std::string& flag,
                                       const std::vector<int>& cli_value,
                                       const std::string& key) const {
    if (scope->count(flag)) return cli_value;
    auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    if (!it->is_array())
      throw InputError("config key \"" + key + "\" must be an array of integers");
    std::vector<int> out;
    for (const auto& v : *it) {
      if (!v.is_number_integer())
        throw InputError("config key \"" + key + "\" must be an array of integers");
      out.push_back(v.get<int>());
    }
    return out;
  }
};

long require_num(const std::optional<long>& v, const std::string& what) {
  if (!v) throw InputError(what + " is required (flag or config file)");
  return *v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic for normal reduction numbers of cone-like "
               "surface singularities"};
  app.set_version_flag("--version", nrcalc::version_string());
  app.require_subcommand(1);

  std::string field_spec, json_path, csv_path, config_path;
  long nmax = 0, umax = 0;
  unsigned long long seed = 0;
  app.add_option("--field", field_spec,
                 "coefficient field: q | rationals | fp:<odd prime> (default q)");
  app.add_option("--nmax", nmax,
                 "q-sequence horizon (default: the family's natural depth)");
  app.add_option("--umax", umax,
                 "degree bound for integral-dependence searches (default 2)");
  app.add_option("--seed", seed, "seed for reduction sampling (default 1)");
  app.add_option("--json", json_path, "also write the report as JSON to PATH");
  app.add_option("--csv", csv_path, "also write the report as CSV to PATH");
  app.add_option("--config", config_path,
                 "JSON file supplying any flag by name; explicit flags win");

  long d = 0, r = 0, g = 0, b = 0, only = 0;
  std::vector<int> degrees;
  std::string graph_path;

  auto* cmd_hyp = app.add_subcommand(
      "hypersurface", "maximal-ideal filtration of the cone over a plane curve");
  cmd_hyp->add_option("--d", d, "plane-curve degree (>= 3)");

  auto* cmd_blow = app.add_subcommand(
      "blowup-family", "ideal attached to one blowup datum (d, r) on the cone");
  cmd_blow->add_option("--d", d, "plane-curve degree (>= 3)");
  cmd_blow->add_option("--r", r, "blowup depth (>= 1)");

  auto* cmd_ver = app.add_subcommand(
      "veronese", "weighted-cone subring family with its non-power closure element");
  cmd_ver->add_option("--g", g, "genus parameter (>= 2)");

  auto* cmd_hyl = app.add_subcommand(
      "hyperelliptic", "curve-side reduction-number bounds for hyperelliptic cones");
  cmd_hyl->add_option("--g", g, "genus (>= 2)");
  cmd_hyl->add_option("--b", b, "multiple of the degree-2 divisor (default 1)");

  auto* cmd_ci = app.add_subcommand(
      "ci-bound", "curve-side bounds for complete-intersection cones");
  cmd_ci->add_option("--degrees", degrees,
                     "hypersurface degrees, e.g. --degrees 2 2");

  auto* cmd_graph = app.add_subcommand(
      "graph", "verify a resolution graph file and its named cycles");
  cmd_graph->add_option("--file", graph_path, "graph JSON file");

  auto* cmd_star = app.add_subcommand(
      "star", "distinguished cycles on the star-shaped blowup graph");
  cmd_star->add_option("--d", d, "plane-curve degree (>= 3)");
  cmd_star->add_option("--r", r, "arm length (>= 1)");

  auto* cmd_acc = app.add_subcommand(
      "accept", "run the acceptance battery; exit 0 iff every criterion passes");
  cmd_acc->add_option("--only", only, "run a single criterion (1..7)");

  for (auto* sub : {cmd_hyp, cmd_blow, cmd_ver, cmd_hyl, cmd_ci, cmd_graph,
                    cmd_star, cmd_acc})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const nlohmann::json cfg = load_config(config_path);
    const Merge merge{cfg};
    CLI::App* sub = app.get_subcommands().front();

    // Shared run options, fully resolved before any computation.
    nrcalc::ClosureRunOptions run;
    auto field_eff =
        merge.str(&app, "--field", field_spec, "field").value_or("q");
    run.field = nrcalc::parse_field(field_eff);
    auto nmax_eff = merge.num(&app, "--nmax", nmax, "nmax");
    if (nmax_eff) run.n_max = static_cast<int>(*nmax_eff);
    run.u_max = static_cast<int>(
        merge.num(&app, "--umax", umax, "umax").value_or(run.u_max));
    run.seed = static_cast<std::uint64_t>(
        merge.num(&app, "--seed", static_cast<long>(seed), "seed")
            .value_or(static_cast<long>(run.seed)));
    auto json_eff = merge.str(&app, "--json", json_path, "json").value_or("");
    auto csv_eff = merge.str(&app, "--csv", csv_path, "csv").value_or("");

    if (sub == cmd_acc) {
      nrcalc::AcceptanceOptions opt;
      if (auto v = merge.num(cmd_acc, "--only", only, "only"))
        opt.only = static_cast<int>(*v);
      return nrcalc::run_acceptance(std::cout, opt) ? 0 : 1;
    }

    auto shared_echo = [&](bool with_linear_algebra) {
      std::string s;
      if (with_linear_algebra) {
        s += " field=" + run.field.describe();
        if (run.n_max) s += " nmax=" + std::to_string(*run.n_max);
        s += " umax=" + std::to_string(run.u_max);
      }
      s += " seed=" + std::to_string(run.seed);
      return s;
    };

    nrcalc::RunReport report;
    auto t0 = std::chrono::steady_clock::now();
    if (sub == cmd_hyp) {
      long dv = require_num(merge.num(cmd_hyp, "--d", d, "d"), "--d");
      report.command = "hypersurface d=" + std::to_string(dv) + shared_echo(true);
      report.families.push_back(
          nrcalc::run_hypersurface_family(static_cast<int>(dv), run));
    } else if (sub == cmd_blow) {
      long dv = require_num(merge.num(cmd_blow, "--d", d, "d"), "--d");
      long rv = require_num(merge.num(cmd_blow, "--r", r, "r"), "--r");
      report.command = "blowup-family d=" + std::to_string(dv) +
                       " r=" + std::to_string(rv) + shared_echo(true);
      report.families.push_back(nrcalc::run_blowup_family(
          static_cast<int>(dv), static_cast<int>(rv), run));
    } else if (sub == cmd_ver) {
      long gv = require_num(merge.num(cmd_ver, "--g", g, "g"), "--g");
      report.command = "veronese g=" + std::to_string(gv) + shared_echo(true);
      report.families.push_back(
          nrcalc::run_veronese_family(static_cast<int>(gv), run));
    } else if (sub == cmd_hyl) {
      long gv = require_num(merge.num(cmd_hyl, "--g", g, "g"), "--g");
      long bv = merge.num(cmd_hyl, "--b", b, "b").value_or(1);
      report.command = "hyperelliptic g=" + std::to_string(gv) +
                       " b=" + std::to_string(bv) + shared_echo(false);
      report.families.push_back(nrcalc::run_hyperelliptic_bounds(
          static_cast<int>(gv), static_cast<int>(bv)));
    } else if (sub == cmd_ci) {
      auto ds = merge.nums(cmd_ci, "--degrees", degrees, "degrees");
      if (!ds || ds->empty())
        throw InputError("--degrees is required (flag or config file)");
      std::string echo = "ci-bound degrees=";
      for (size_t i = 0; i < ds->size(); ++i)
        echo += (i ? "x" : "") + std::to_string((*ds)[i]);
      report.command = echo + shared_echo(false);
      report.families.push_back(nrcalc::run_ci_bounds(*ds));
    } else if (sub == cmd_graph) {
      auto path = merge.str(cmd_graph, "--file", graph_path, "file");
      if (!path || path->empty())
        throw InputError("--file is required (flag or config file)");
      report.command = "graph file=" + *path + shared_echo(false);
      report.families.push_back(nrcalc::run_graph_file(*path));
    } else if (sub == cmd_star) {
      long dv = require_num(merge.num(cmd_star, "--d", d, "d"), "--d");
      long rv = require_num(merge.num(cmd_star, "--r", r, "r"), "--r");
      report.command = "star d=" + std::to_string(dv) +
                       " r=" + std::to_string(rv) + shared_echo(false);
      report.families.push_back(
          nrcalc::run_star_family(static_cast<int>(dv), static_cast<int>(rv)));
    } else {
      throw InputError("unknown subcommand");
    }
    std::fprintf(
        stderr, "[timing] %s: %.2fs\n", sub->get_name().c_str(),
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count());

    for (auto& fam : report.families) {
      fam.seeded = true;
      fam.seed = run.seed;
    }

    std::cout << nrcalc::render_table(report);
    if (!json_eff.empty()) write_file(json_eff, nrcalc::render_json(report));
    if (!csv_eff.empty()) write_file(csv_eff, nrcalc::render_csv(report));
    return report.all_checks_pass() ? 0 : 1;
  } catch (const nrcalc::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nrcalc::ComputeError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

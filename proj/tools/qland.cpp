#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qland/errors.hpp"
#include "qland/harness.hpp"

namespace {

using namespace qland;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& item : split(s, ',')) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(item, &pos);
    if (pos != item.size()) throw DomainError(std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw DomainError(std::string(what) + " list is empty");
  return out;
}

std::vector<double> parse_radii(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw DomainError("--radii expects start:stop:count");
  return linear_radii(std::stod(parts[0]), std::stod(parts[1]), std::stoull(parts[2]));
}

template <class Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct SweepOptions {
  std::string config;
  std::string ansatz;
  std::string layers;
  std::size_t qubits = 0;
  std::size_t reps = 0;
  std::string radii;
  std::string samples;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format;
  std::size_t threads = 0;
  bool full_scale = false;
};

void add_sweep_options(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--ansatz", o.ansatz, "Comma-separated ansatz families");
  cmd->add_option("--layers", o.layers, "Comma-separated layer counts");
  cmd->add_option("--qubits", o.qubits, "Number of qubits");
  cmd->add_option("--reps", o.reps, "Repetitions per ansatz and layer count");
  cmd->add_option("--radii", o.radii, "Radius grid as start:stop:count");
  cmd->add_option("--samples", o.samples, "Comma-separated sample kinds");
  cmd->add_option("--seed", o.seed, "Master seed")->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--out", o.out, "Output path (stdout if omitted)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", o.threads, "Worker threads");
  cmd->add_flag("--full-scale", o.full_scale, "Use n = 5 and layers 1,4,8,12,16 as defaults");
}

ExperimentConfig build_config(Experiment e, const SweepOptions& o) {
  ExperimentConfig c;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot read config '" + o.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw DomainError(std::string("config is not valid JSON: ") + ex.what());
    }
    c = config_from_json(j);
    if (c.experiment != e) {
      throw DomainError("config experiment '" + to_string(c.experiment) + "' does not match subcommand");
    }
  } else {
    c = default_config(e, o.full_scale);
  }
  std::vector<std::size_t> layers;
  if (!o.layers.empty()) layers = parse_sizes(o.layers, "--layers");
  if (!o.ansatz.empty()) {
    std::vector<std::size_t> keep = layers;
    if (keep.empty()) keep = c.ansatz.empty() ? std::vector<std::size_t>{1} : c.ansatz.front().layers;
    c.ansatz.clear();
    for (const auto& name : split(o.ansatz, ',')) c.ansatz.push_back({ansatz_family_from_string(name), keep});
  } else if (!layers.empty()) {
    for (auto& a : c.ansatz) a.layers = layers;
  }
  if (o.qubits) c.qubits = o.qubits;
  if (o.reps) c.repetitions = o.reps;
  if (!o.radii.empty()) c.radii = parse_radii(o.radii);
  if (!o.samples.empty()) {
    c.sample_kinds = nlohmann::json::array();
    for (const auto& s : split(o.samples, ',')) c.sample_kinds.push_back(s);
  }
  if (o.seed_set) c.master_seed = o.seed;
  if (!o.out.empty()) c.output = o.out;
  if (!o.format.empty()) c.format = output_format_from_string(o.format);
  if (o.threads) c.threads = o.threads;
  c.validate();
  return c;
}

void run_sweep(Experiment e, const SweepOptions& o) {
  const ExperimentConfig c = build_config(e, o);
  if (e == Experiment::expressivity) {
    const auto records = run_expressivity(c);
    write_output(c.output, [&](std::ostream& out) {
      if (c.format == OutputFormat::csv) {
        write_csv(out, records);
      } else {
        out << to_json(records).dump(2) << '\n';
      }
    });
    return;
  }
  const auto records = run_experiment(c);
  write_output(c.output, [&](std::ostream& out) {
    if (c.format == OutputFormat::csv) {
      write_csv(out, records);
    } else {
      out << nlohmann::json{{"config", to_json(c)}, {"records", records_to_json(records)}}.dump(2) << '\n';
    }
  });
  for (const auto& r : records) {
    if (r.error) throw std::runtime_error("run " + std::to_string(r.run_id) + " failed: " + *r.error);
  }
}

int fail(const std::string& type, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", type}, {"message", message}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-landscape experiments for unitary learning with entangled samples"};
  app.require_subcommand(1);

  std::string dims = "2,4,8";
  std::size_t trials = 100;
  std::uint64_t vb_seed = 0;
  std::string vb_out;
  std::string vb_format = "json";
  auto* vb = app.add_subcommand("verify-bounds", "Randomised checks of the closed-form bounds");
  vb->add_option("--dims", dims, "Comma-separated dimensions");
  vb->add_option("--trials", trials, "Random instances per dimension");
  vb->add_option("--seed", vb_seed, "Seed");
  vb->add_option("--out", vb_out, "Output path (stdout if omitted)");
  vb->add_option("--format", vb_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::size_t resolution = 101;
  std::string ls_out;
  std::string ls_format = "csv";
  auto* ls = app.add_subcommand("landscape", "One-qubit loss landscape grids");
  ls->add_option("--resolution", resolution, "Grid points per axis");
  ls->add_option("--out", ls_out, "Output path (stdout if omitted)");
  ls->add_option("--format", ls_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  struct Sub {
    const char* name;
    const char* help;
    Experiment experiment;
  };
  const Sub subs[] = {
      {"distance", "Radius sweeps and distance to the nearest minimum", Experiment::distance},
      {"improvement", "Improvement at R_max, separable vs entangled", Experiment::improvement},
      {"nme-sweep", "Improvement across non-maximally entangled samples", Experiment::nme_sweep},
      {"expressivity", "KL-divergence expressivity of the ansatz families", Experiment::expressivity},
  };
  std::vector<SweepOptions> opts(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_sweep_options(cmds.back(), opts[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (vb->parsed()) {
      const auto checks = verify_bounds(parse_sizes(dims, "--dims"), trials, vb_seed);
      write_output(vb_out, [&](std::ostream& out) {
        if (vb_format == "csv") {
          write_csv(out, checks);
        } else {
          out << to_json(checks).dump(2) << '\n';
        }
      });
      for (const auto& c : checks) {
        if (!c.passed()) return fail("check_failed", c.name + " failed at d=" + std::to_string(c.dim), 3);
      }
      return 0;
    }
    if (ls->parsed()) {
      const auto result = landscape(resolution);
      write_output(ls_out, [&](std::ostream& out) {
        if (ls_format == "csv") {
          write_csv(out, result);
        } else {
          out << to_json(result).dump(2) << '\n';
        }
      });
      return 0;
    }
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (cmds[i]->parsed()) run_sweep(subs[i].experiment, opts[i]);
    }
  } catch (const DimensionError& e) {
    return fail("dimension_error", e.what(), 4);
  } catch (const InvariantError& e) {
    return fail("invariant_error", e.what(), 4);
  } catch (const DomainError& e) {
    return fail("domain_error", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("runtime_error", e.what(), 1);
  }
  return 0;
}

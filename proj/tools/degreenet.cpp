// degreenet command line: exact-pmf, simulate, figure, estimate, verify.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "degreenet/cli/commands.hpp"
#include "degreenet/cli/verify.hpp"
#include "degreenet/errors.hpp"

namespace {

using namespace degreenet;

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  std::vector<std::string> shorthand;
};

// Shorthand flags become ordinary overrides so they hash like config keys.
void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("-c,--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--set", f.sets, "override key=value (dotted keys allowed)");
  auto alias = [&](const char* flag, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        flag, [&f, key](const std::string& v) { f.shorthand.push_back(std::string(key) + "=" + v); },
        help);
  };
  alias("-n,--n", "n", "number of nodes");
  alias("-s,--seed", "master_seed", "master seed");
  alias("-o,--out", "output_dir", "output directory");
  alias("-j,--threads", "threads", "worker threads");
}

int report_error(const char* kind, const std::string& msg, int code) {
  std::cerr << "degreenet: " << kind << ": " << msg << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree distributions of rank-one inhomogeneous random graphs"};
  app.set_version_flag("--version", DEGREENET_VERSION);
  app.require_subcommand(1);

  Flags flags;
  struct Sub {
    CLI::App* app;
    cli::Command cmd;
  };
  std::vector<Sub> subs = {
      {app.add_subcommand("exact-pmf", "degree pmf by exact or asymptotic formulas"),
       cli::Command::exact_pmf},
      {app.add_subcommand("simulate", "sample graphs and tabulate degrees"), cli::Command::simulate},
      {app.add_subcommand("figure", "regenerate figure data"), cli::Command::figure},
      {app.add_subcommand("estimate", "estimate weights from observed degrees"),
       cli::Command::estimate},
      {app.add_subcommand("verify", "run a numerical self-check suite"), cli::Command::verify},
  };
  for (auto& s : subs) add_common(s.app, flags);
  subs[2].app->add_option_function<std::string>(
      "figure_id", [&](const std::string& v) { flags.shorthand.push_back("figure=" + v); },
      "1, 2 or 3");
  subs[4].app->add_option_function<std::string>(
      "suite", [&](const std::string& v) { flags.shorthand.push_back("suite=\"" + v + "\""); },
      "specfun, oracle, moments or clt");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::Command cmd{};
    for (const auto& s : subs) {
      if (s.app->parsed()) cmd = s.cmd;
    }
    std::vector<std::string> overrides = flags.shorthand;
    overrides.insert(overrides.end(), flags.sets.begin(), flags.sets.end());
    std::optional<std::filesystem::path> file;
    if (!flags.config.empty()) file = flags.config;
    const cli::RunConfig cfg = cli::load_config(cmd, file, overrides);

    if (cmd == cli::Command::verify) {
      const auto names = cfg.suite.empty() ? cli::suite_names() : std::vector{cfg.suite};
      io::Json all = io::Json::array();
      bool ok = true;
      for (const auto& name : names) {
        const auto rep = cli::run_suite(name, cfg);
        for (const auto& c : rep.checks) {
          std::cout << (c.pass ? "PASS " : "FAIL ") << rep.suite << "." << c.name
                    << " measured=" << c.measured << " bound=" << c.bound << "\n";
        }
        ok = ok && rep.all_pass();
        all.push_back(rep.json());
      }
      io::write_file(cfg.output_dir / "verify.json", all.dump(2) + "\n");
      return ok ? 0 : 3;
    }

    const cli::RunOutput out = cli::run(cfg);
    for (const auto& f : out.files) std::cout << (cfg.output_dir / f).string() << "\n";
    std::cout << out.summary.dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    return report_error("config", e.what(), 1);
  } catch (const ModelError& e) {
    return report_error("model", e.what(), 1);
  } catch (const DomainError& e) {
    return report_error("domain", e.what(), 1);
  } catch (const DegenerateError& e) {
    return report_error("degenerate", e.what(), 1);
  } catch (const InsufficientDataError& e) {
    return report_error("data", e.what(), 1);
  } catch (const CapacityError& e) {
    return report_error("capacity", e.what(), 1);
  } catch (const NumericError& e) {
    return report_error("numeric", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), 2);
  }
}

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "commands.hpp"

namespace {

using namespace fieldvision;

// One --<key> flag per RunConfig field; values are applied on top of the
// optional --config file.
struct ConfigFlags {
  std::optional<std::string> file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "key = value configuration file");
    for (std::string_view key : RunConfig::kKeys) {
      const std::string name(key);
      cmd->add_option_function<std::string>(
          "--" + name, [this, name](const std::string& v) { overrides[name] = v; },
          "override '" + name + "'");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = file ? load_config(*file) : RunConfig{};
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    cfg.validate();
    return cfg;
  }
};

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << p << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interest maps and pan-tilt exploration for geological imagery"};
  app.require_subcommand(1);

  std::string input, out_dir = ".";
  std::optional<std::string> state_path;
  int repetitions = 5;
  bool save_maps = false;
  ConfigFlags flags;

  auto* decompose = app.add_subcommand("decompose", "write H, S, I and four Sobel edge maps");
  decompose->add_option("input", input, "PNG or binary PPM image")->required();
  decompose->add_option("-o,--out", out_dir, "output directory");

  auto* seg = app.add_subcommand("segment", "write co-occurrence segmentations of H, S, I");
  seg->add_option("input", input, "PNG or binary PPM image")->required();
  seg->add_option("-o,--out", out_dir, "output directory");
  flags.attach(seg);

  auto* unc = app.add_subcommand("uncommon", "write uncommon maps of H, S, I");
  unc->add_option("input", input, "PNG or binary PPM image")->required();
  unc->add_option("-o,--out", out_dir, "output directory");
  flags.attach(unc);

  auto* interest = app.add_subcommand("interest", "fuse all maps into the interest map");
  interest->add_option("input", input, "PNG or binary PPM image")->required();
  interest->add_option("-s,--state", state_path, "fusion state from a previous run");
  interest->add_option("-o,--out", out_dir, "output directory");
  flags.attach(interest);

  auto* session = app.add_subcommand("session", "simulate pan-tilt exploration of a mosaic");
  session->add_option("mosaic", input, "PNG or binary PPM mosaic")->required();
  session->add_option("-o,--out", out_dir, "output directory");
  session->add_flag("--save-maps", save_maps, "write each step's interest map");
  flags.attach(session);

  auto* bench = app.add_subcommand("bench", "time each pipeline stage");
  bench->add_option("input", input, "PNG or binary PPM image")->required();
  bench->add_option("-r,--repetitions", repetitions, "number of timed runs")
      ->check(CLI::PositiveNumber);
  flags.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  try {
    if (*decompose) {
      print_paths(cli::cmd_decompose(input, out_dir));
    } else if (*seg) {
      print_paths(cli::cmd_segment(input, out_dir, flags.resolve()));
    } else if (*unc) {
      print_paths(cli::cmd_uncommon(input, out_dir, flags.resolve()));
    } else if (*interest) {
      const auto o = cli::cmd_interest(input, state_path, out_dir, flags.resolve());
      print_paths({o.interest_png, o.interest_npy, o.points, o.state});
    } else if (*session) {
      const Trajectory t = cli::cmd_session(input, flags.resolve(), out_dir, save_maps);
      std::cout << t.steps.size() << " steps, " << t.fixations.size() << " fixations\n";
    } else if (*bench) {
      cli::cmd_bench(input, repetitions, flags.resolve(), std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return cli::kIoError;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return cli::kFormatError;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kInputError;
  }
  return cli::kOk;
}

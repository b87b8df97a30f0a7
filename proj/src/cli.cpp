#include "twophase/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <sstream>

#include "twophase/baseline.hpp"
#include "twophase/error.hpp"
#include "twophase/imgio.hpp"

namespace twophase::cli {

namespace {

struct RawArgs {
  std::string input;
  std::string output;
  std::string synthetic;
  int size = 128;
  double noise = 0.05;
  std::uint64_t seed = 7;
  std::string energy_csv;
  std::string snapshot_dir;
  std::string u_field;
  std::string summary = "text";
};

void add_common(CLI::App& sub, RawArgs& raw) {
  sub.add_option("input", raw.input, "Input image (PGM or PNG)");
  sub.add_option("-o,--output", raw.output, "Output mask (.png, or .pgm)")->required();
  sub.add_option("--synthetic", raw.synthetic, "Use a generated test image instead of a file")
      ->check(CLI::IsMember({"disk", "bars"}));
  sub.add_option("--size", raw.size, "Synthetic image side length")->check(CLI::Range(16, 1 << 14));
  sub.add_option("--noise", raw.noise, "Synthetic Gaussian noise std-dev")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--seed", raw.seed, "Synthetic noise seed");
  sub.add_option("--summary", raw.summary, "Summary format")->check(CLI::IsMember({"text", "json"}));
}

void add_solver(CLI::App& sub, RawArgs& raw, SolverParams& p) {
  sub.add_option("--lambda", p.lambda, "Data weight")->check(CLI::PositiveNumber);
  sub.add_option("--gamma", p.gamma, "Penalty weight")->check(CLI::PositiveNumber);
  sub.add_option("--tau", p.tau, "Bregman update step")->check(CLI::PositiveNumber);
  sub.add_option("--avg-window", p.avg_window, "Energies averaged by the stopping rule")
      ->check(CLI::Range(1, 1 << 20));
  sub.add_option("--tol", p.tol, "Relative energy tolerance")->check(CLI::PositiveNumber);
  sub.add_option("--sigma", p.weight.sigma, "Edge-weight Gaussian std-dev (pixels)")
      ->check(CLI::PositiveNumber);
  sub.add_option("--rho", p.weight.rho, "Edge-weight gradient scale")->check(CLI::PositiveNumber);
  sub.add_flag("--uniform-weight", p.weight.uniform, "Use g = 1 (unweighted TV)");
  sub.add_option("--threshold", p.threshold, "Foreground threshold on u, in (0, 1)");
  sub.add_option("--max-iters", p.max_iters, "Iteration cap")->check(CLI::Range(1, 1 << 30));
  sub.add_option("--snapshot-every", p.snapshot_every, "Write iter_<k>.png every k iterations")
      ->check(CLI::NonNegativeNumber);
  sub.add_option("--snapshot-dir", raw.snapshot_dir, "Directory for snapshots");
  sub.add_option("--energy-csv", raw.energy_csv, "Write the energy trace as CSV");
  sub.add_option("--u-field", raw.u_field, "Write the final u as 16-bit PNG");
}

std::string format_summary(const nlohmann::ordered_json& summary, SummaryFormat format) {
  if (format == SummaryFormat::json) return summary.dump(2) + "\n";
  std::ostringstream text;
  for (const auto& [key, value] : summary.items())
    text << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  return text.str();
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Two-phase image segmentation with split Bregman iterations", "twophase"};
  app.require_subcommand(1);
  RawArgs raw;
  RunConfig config;

  auto* seg = app.add_subcommand("segment", "Segment an image by minimising the weighted-TV energy");
  add_common(*seg, raw);
  add_solver(*seg, raw, config.solver);
  auto* otsu = app.add_subcommand("otsu", "Threshold an image with Otsu's method");
  add_common(*otsu, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream help, unused;
    app.exit(e, help, unused);
    throw HelpRequested(help.str());
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream help, unused;
    app.exit(e, help, unused);
    throw HelpRequested(help.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  config.command = seg->parsed() ? Command::segment : Command::otsu;

  if (!raw.synthetic.empty()) {
    if (!raw.input.empty()) throw UsageError("give either an input image or --synthetic, not both");
    config.synthetic = SyntheticSpec{parse_synthetic_kind(raw.synthetic), raw.size, raw.noise, raw.seed};
  } else if (raw.input.empty()) {
    throw UsageError("input: an input image path (or --synthetic) is required");
  }
  config.input_path = raw.input;
  config.output_mask_path = raw.output;
  if (!raw.energy_csv.empty()) config.energy_csv_path = raw.energy_csv;
  if (!raw.snapshot_dir.empty()) config.snapshot_dir = raw.snapshot_dir;
  if (!raw.u_field.empty()) config.u_field_path = raw.u_field;
  config.summary_format = raw.summary == "json" ? SummaryFormat::json : SummaryFormat::text;

  if (!(config.solver.threshold > 0.0 && config.solver.threshold < 1.0))
    throw UsageError("--threshold: value must lie strictly between 0 and 1");
  if (config.solver.snapshot_every > 0 && !config.snapshot_dir)
    throw UsageError("--snapshot-every: requires --snapshot-dir");
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    ScalarField image;
    std::optional<Mask> truth;
    nlohmann::ordered_json summary;
    summary["command"] = config.command == Command::segment ? "segment" : "otsu";

    if (config.synthetic) {
      const auto& s = *config.synthetic;
      SyntheticImage synth = make_synthetic(s.kind, s.size, s.noise, s.seed);
      image = std::move(synth.image);
      truth = std::move(synth.truth);
      summary["input"] = std::string("synthetic:") + (s.kind == SyntheticKind::disk ? "disk" : "bars");
    } else {
      image = read_image(config.input_path);
      summary["input"] = config.input_path.string();
    }
    summary["width"] = image.width();
    summary["height"] = image.height();

    Mask mask;
    if (config.command == Command::otsu) {
      summary["threshold"] = otsu_threshold(image);
      mask = otsu_segment(image);
    } else {
      IterationObserver observer;
      if (config.snapshot_dir && config.solver.snapshot_every > 0) {
        std::filesystem::create_directories(*config.snapshot_dir);
        observer = [&](int iter, const ScalarField& u, double) {
          write_mask(threshold_mask(u, config.solver.threshold),
                     *config.snapshot_dir / ("iter_" + std::to_string(iter) + ".png"));
        };
      }
      SegmentationResult result = segment(image, config.solver, observer);
      mask = std::move(result.mask);

      if (config.energy_csv_path) write_energy_csv(result.energy_trace, *config.energy_csv_path);
      if (config.u_field_path) write_field(result.u_final, *config.u_field_path);

      summary["lambda"] = config.solver.lambda;
      summary["iterations"] = result.iterations;
      summary["stop_reason"] = std::string(to_string(result.stop_reason));
      summary["c1"] = result.c1;
      summary["c2"] = result.c2;
      summary["final_energy"] = result.energy_trace.back();
      summary["elapsed_seconds"] = result.elapsed_seconds;
    }

    write_mask(mask, config.output_mask_path);
    std::size_t foreground = 0;
    for (auto v : mask) foreground += v != 0;
    summary["foreground_pixels"] = foreground;
    summary["boundary_transitions"] = boundary_transitions(mask);
    if (truth) summary["ground_truth_agreement"] = agreement(mask, *truth);
    summary["mask"] = config.output_mask_path.string();

    out << format_summary(summary, config.summary_format);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "twophase: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "twophase: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "twophase: " << e.what() << "\n";
    return kExitUsage;
  }
  return run(config, out, err);
}

}  // namespace twophase::cli

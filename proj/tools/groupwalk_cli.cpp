// groupwalk: online group-walking analytics over bounding-box detection streams.
//
//   groupwalk run      --detections FILE [--output FILE]
//   groupwalk evaluate --detections FILE --truth FILE [--per-frame]
//   groupwalk sweep    --detections FILE --truth FILE [--a-grid ..] [--b-grid ..]
//   groupwalk synth    (--scenario NAME | --spec FILE) --detections FILE --truth FILE

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "groupwalk/error.hpp"
#include "groupwalk/io.hpp"
#include "groupwalk/pipeline.hpp"
#include "groupwalk/synth.hpp"

namespace {

using namespace groupwalk;

// "-" selects stdin / stdout.
class Input {
public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
      }
    }
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
      }
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

void add_engine_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-a,--a", cfg.similarity.a, "Scale-factor slope a")->capture_default_str();
  cmd->add_option("-b,--b", cfg.similarity.b, "Scale-factor offset b")->capture_default_str();
  cmd->add_option("--eigengap", cfg.spectral.eigengap_coefficient, "Eigengap coefficient")
      ->capture_default_str();
  cmd->add_option("--flat-spectrum", cfg.spectral.flat_spectrum,
                  "Eigenvalue spread below which every track is its own cluster")
      ->capture_default_str();
  cmd->add_option("--meas-noise", cfg.kalman.meas_noise, "Measurement noise variance")
      ->capture_default_str();
  cmd->add_option("--proc-noise-pos", cfg.kalman.proc_noise_pos, "Process noise, box components")
      ->capture_default_str();
  cmd->add_option("--proc-noise-vel", cfg.kalman.proc_noise_vel, "Process noise, flow components")
      ->capture_default_str();
  cmd->add_option("--init-cov-pos", cfg.kalman.init_cov_pos, "Initial box covariance")
      ->capture_default_str();
  cmd->add_option("--init-cov-vel", cfg.kalman.init_cov_vel, "Initial flow covariance")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.spectral.seed, "k-means seed")->capture_default_str();
  cmd->add_option("--max-gap", cfg.max_gap, "Frames a track may go unseen before it is dropped")
      ->capture_default_str();
}

void add_scoring_flags(CLI::App* cmd, RunConfig& cfg, std::string& dets, std::string& truth) {
  cmd->add_option("-d,--detections", dets, "Detection file (frame,id,x,y,w,h), '-' for stdin")
      ->required();
  cmd->add_option("-t,--truth", truth, "Ground-truth file (frame,id,group)")->required();
  cmd->add_option("--burn-in", cfg.burn_in, "Leading frames excluded from scoring")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online pedestrian group-walking detection"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string dets_path;
  std::string truth_path;
  std::string out_path = "-";
  bool per_frame = false;
  std::vector<double> a_grid = kDefaultAGrid;
  std::vector<double> b_grid = kDefaultBGrid;
  std::string scenario;
  std::string spec_path;
  std::uint64_t synth_seed = 0;
  bool list = false;

  auto* run_cmd = app.add_subcommand("run", "Cluster a detection stream frame by frame (JSON Lines)");
  run_cmd->add_option("-d,--detections", dets_path, "Detection file, '-' for stdin")->required();
  run_cmd->add_option("-o,--output", out_path, "Output file, '-' for stdout")->capture_default_str();
  add_engine_flags(run_cmd, cfg);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a detection stream against ground truth");
  add_scoring_flags(eval_cmd, cfg, dets_path, truth_path);
  add_engine_flags(eval_cmd, cfg);
  eval_cmd->add_flag("--per-frame", per_frame, "Include the per-frame AMI series");
  eval_cmd->add_option("-o,--output", out_path, "Report file, '-' for stdout")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Mean AMI over a grid of (a, b)");
  add_scoring_flags(sweep_cmd, cfg, dets_path, truth_path);
  add_engine_flags(sweep_cmd, cfg);
  sweep_cmd->add_option("--a-grid", a_grid, "Values of a")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--b-grid", b_grid, "Values of b")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("-o,--output", out_path, "CSV file, '-' for stdout")->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scenario with ground truth");
  auto* preset_opt = synth_cmd->add_option("-s,--scenario", scenario, "Preset name");
  auto* spec_opt = synth_cmd->add_option("--spec", spec_path, "Scenario JSON file");
  preset_opt->excludes(spec_opt);
  synth_cmd->add_option("--seed", synth_seed, "Noise seed (presets only)")->capture_default_str();
  synth_cmd->add_option("-d,--detections", dets_path, "Detection output file");
  synth_cmd->add_option("-t,--truth", truth_path, "Ground-truth output file");
  synth_cmd->add_flag("--list", list, "List preset names and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      Input in(dets_path);
      Output out(out_path);
      run_stream(in.stream(), out.stream(), cfg);
    } else if (eval_cmd->parsed() || sweep_cmd->parsed()) {
      Input din(dets_path);
      const auto dets = read_detections(din.stream());
      Input tin(truth_path);
      const auto truth = read_truth(tin.stream());
      Output out(out_path);
      if (eval_cmd->parsed()) {
        out.stream() << format_report(evaluate(dets, truth, cfg), per_frame) << '\n';
      } else {
        write_sweep_csv(out.stream(), sweep(dets, truth, a_grid, b_grid, cfg));
      }
    } else if (synth_cmd->parsed()) {
      if (list) {
        for (const auto& name : preset_names()) {
          std::cout << name << '\n';
        }
        return 0;
      }
      ScenarioSpec spec;
      if (!spec_path.empty()) {
        Input in(spec_path);
        spec = parse_scenario(in.stream());
      } else if (!scenario.empty()) {
        spec = preset_scenario(scenario, synth_seed);
      } else {
        throw ContractViolation("synth needs --scenario or --spec");
      }
      if (dets_path.empty() || truth_path.empty()) {
        throw ContractViolation("synth needs --detections and --truth output paths");
      }
      const Scenario s = generate(spec);
      Output dout(dets_path);
      write_detections(dout.stream(), flatten_detections(s));
      Output tout(truth_path);
      write_truth(tout.stream(), flatten_truth(s));
    }
  } catch (const FormatError& e) {
    std::cerr << "groupwalk: format error: " << e.what() << '\n';
    return 2;
  } catch (const AlignmentError& e) {
    std::cerr << "groupwalk: alignment error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "groupwalk: numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "groupwalk: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

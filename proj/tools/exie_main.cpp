// eXIE command line tool.
//
// Subcommands:
//   trace    search for an operator sequence explaining an enhancement
//   apply    replay a sequence file onto an image
//   metrics  fidelity metrics (PSNR, SSIM, CIE76) between two images
//   synth    deterministic planted-edit fixture generator
//   stats    operator usage histogram over sequence files
//
// Exit codes: 0 success, 2 file I/O, 3 image decoding, 4 sequence parsing,
// 5 image dimensions, 6 configuration or usage, 1 anything else.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exie/exie.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw exie::IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw exie::IoError("read failed: " + path);
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw exie::IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw exie::IoError("write failed: " + path);
}

/// PSNR is infinite for identical images; JSON has no infinity, so emit the
/// string "inf" in that case.
json psnr_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

struct TraceArgs {
  std::string input, target, out, replay;
  int search_res = 0;  // 0: search at native resolution
  double tau = 2.0;
  bool tau_per_pixel = false;
  std::size_t max_nodes = 7000;
  std::string tie_break = "lifo";
  std::string dedup = "none";
};

void check_distinct_outputs(const TraceArgs& a) {
  const std::vector<std::string> inputs{a.input, a.target};
  std::vector<std::string> outputs{a.out};
  if (!a.replay.empty()) outputs.push_back(a.replay);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    for (const std::string& in : inputs)
      if (outputs[i] == in)
        throw exie::ConfigError("output path equals input path: " +
                                outputs[i]);
    for (std::size_t j = i + 1; j < outputs.size(); ++j)
      if (outputs[i] == outputs[j])
        throw exie::ConfigError("output paths must be distinct: " +
                                outputs[i]);
  }
}

int run_trace(const TraceArgs& a) {
  check_distinct_outputs(a);

  const exie::Image full_input = exie::load_image(a.input);
  const exie::Image full_target = exie::load_image(a.target);

  exie::Image sx, st;
  if (a.search_res > 0) {
    sx = exie::resize_box(full_input, a.search_res, a.search_res);
    st = exie::resize_box(full_target, a.search_res, a.search_res);
  } else {
    if (!full_input.same_size(full_target))
      throw exie::DimensionError(
          "input and target sizes differ; pass --search-res to search on a "
          "common downscale");
    sx = full_input;
    st = full_target;
  }

  exie::SearchConfig cfg;
  cfg.tau = a.tau_per_pixel
                ? a.tau * std::sqrt(static_cast<double>(sx.value_count()))
                : a.tau;
  cfg.max_expansions = a.max_nodes;
  cfg.tie_break =
      a.tie_break == "fifo" ? exie::TieBreak::Fifo : exie::TieBreak::Lifo;
  cfg.dedup = a.dedup == "hash" ? exie::DedupMode::QuantizedHash
                                : exie::DedupMode::None;

  exie::SearchReport rep = exie::exie_search(sx, st, cfg);

  exie::EditSequence seq = rep.sequence;
  json search_meta{
      {"tau", a.tau},
      {"tau_effective", cfg.tau},
      {"tau_per_pixel", a.tau_per_pixel},
      {"max_nodes", a.max_nodes},
      {"tie_break", a.tie_break},
      {"dedup", a.dedup},
      {"expanded", rep.expanded},
      {"generated", rep.generated},
      {"input_distance", rep.input_distance},
      {"result_distance", rep.result_distance},
      {"terminated_by", rep.terminated_by == exie::Termination::Threshold
                            ? "threshold"
                            : "budget"},
  };
  if (a.search_res > 0) search_meta["search_res"] = a.search_res;
  seq.meta = {{"input", a.input}, {"target", a.target},
              {"search", search_meta}};
  spit(a.out, exie::serialize(seq));

  if (!a.replay.empty())
    exie::save_image(exie::apply_sequence(seq, full_input), a.replay);

  std::cerr << "trace: " << seq.ops.size() << " operators, "
            << (rep.terminated_by == exie::Termination::Threshold
                    ? "threshold"
                    : "budget")
            << ", expanded " << rep.expanded << ", generated " << rep.generated
            << ", distance " << rep.input_distance << " -> "
            << rep.result_distance << ", " << rep.wall_time_seconds << "s\n";
  return 0;
}

struct ApplyArgs {
  std::string input, seq, out;
};

int run_apply(const ApplyArgs& a) {
  const exie::EditSequence seq = exie::parse_sequence(slurp(a.seq));
  const exie::Image img = exie::load_image(a.input);
  exie::save_image(exie::apply_sequence(seq, img), a.out);
  std::cerr << "apply: " << seq.ops.size() << " operators -> " << a.out
            << "\n";
  return 0;
}

int run_metrics(const std::string& pa, const std::string& pb) {
  const exie::Image a = exie::load_image(pa);
  const exie::Image b = exie::load_image(pb);
  const exie::MetricsReport m = exie::metrics_report(a, b);
  json doc{{"delta_e76", m.delta_e76},
           {"psnr", psnr_json(m.psnr)},
           {"ssim", m.ssim}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct SynthArgs {
  std::uint64_t seed = 0;
  int length = 0;
  std::string out_dir;
};

int run_synth(const SynthArgs& a) {
  const exie::SyntheticPair pair = exie::make_synthetic_pair(a.seed, a.length);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec)
    throw exie::IoError("cannot create directory " + a.out_dir + ": " +
                        ec.message());
  const std::string input_path = a.out_dir + "/input.png";
  const std::string target_path = a.out_dir + "/target.png";
  const std::string truth_path = a.out_dir + "/truth.json";
  exie::save_image(pair.input, input_path);
  exie::save_image(pair.target, target_path);
  spit(truth_path, exie::serialize(pair.truth));
  json doc{{"input", input_path},
           {"length", a.length},
           {"seed", a.seed},
           {"target", target_path},
           {"truth", truth_path}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_stats(const std::vector<std::string>& paths) {
  exie::OperatorHistogram hist;
  std::vector<std::string> bad;
  std::size_t sequences = 0;
  for (const std::string& p : paths) {
    try {
      hist.add(exie::parse_sequence(slurp(p)));
      ++sequences;
    } catch (const exie::ParseError& e) {
      bad.push_back(p + ": " + e.what());
    }
  }
  if (!bad.empty()) {
    for (const std::string& line : bad) std::cerr << "stats: " << line << "\n";
    throw exie::ParseError(std::to_string(bad.size()) +
                           " sequence file(s) failed to parse");
  }
  json ops = json::array();
  for (const auto& [op, count] : hist.per_operator)
    ops.push_back({{"channels", exie::selector_name(op.channels)},
                   {"count", count},
                   {"family", exie::family_name(op.family)},
                   {"param", op.param}});
  json groups = json::array();
  for (const auto& [key, count] : hist.per_group)
    groups.push_back(
        {{"channels", key.second}, {"count", count}, {"family", key.first}});
  json doc{{"groups", groups},
           {"operators", ops},
           {"sequences", sequences},
           {"total", hist.total}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"eXIE: explain an image enhancement as an operator sequence"};
  app.require_subcommand(1);

  TraceArgs trace;
  CLI::App* trace_cmd = app.add_subcommand(
      "trace", "Search for an operator sequence from input toward target");
  trace_cmd->add_option("--input", trace.input, "Source image (PNG or PPM)")
      ->required();
  trace_cmd->add_option("--target", trace.target, "Enhanced image to explain")
      ->required();
  trace_cmd->add_option("--out", trace.out, "Sequence JSON output path")
      ->required();
  trace_cmd->add_option("--replay", trace.replay,
                        "Also write the sequence applied to the full input");
  trace_cmd
      ->add_option("--search-res", trace.search_res,
                   "Box-downscale both images to this square size before "
                   "searching")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--tau", trace.tau, "Stop distance (default 2.0)")
      ->check(CLI::NonNegativeNumber);
  trace_cmd->add_flag("--tau-per-pixel", trace.tau_per_pixel,
                      "Interpret --tau per sample (scaled by sqrt(3HW))");
  trace_cmd
      ->add_option("--max-nodes", trace.max_nodes,
                   "Expansion budget (default 7000)")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--tie-break", trace.tie_break, "lifo or fifo")
      ->check(CLI::IsMember({"lifo", "fifo"}));
  trace_cmd->add_option("--dedup", trace.dedup, "none or hash")
      ->check(CLI::IsMember({"none", "hash"}));

  ApplyArgs apply_args;
  CLI::App* apply_cmd =
      app.add_subcommand("apply", "Apply a sequence file to an image");
  apply_cmd->add_option("--input", apply_args.input, "Image to edit")
      ->required();
  apply_cmd->add_option("--seq", apply_args.seq, "Sequence JSON file")
      ->required();
  apply_cmd->add_option("--out", apply_args.out, "Output image path")
      ->required();

  std::string metrics_a, metrics_b;
  CLI::App* metrics_cmd = app.add_subcommand(
      "metrics", "Print PSNR, SSIM and mean CIE76 for two images as JSON");
  metrics_cmd->add_option("a", metrics_a, "First image")->required();
  metrics_cmd->add_option("b", metrics_b, "Second image")->required();

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Write a deterministic planted-edit fixture "
               "(input.png, target.png, truth.json)");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->required();
  synth_cmd->add_option("--len", synth.length, "Planted program length (1-5)")
      ->required();
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")
      ->required();

  std::vector<std::string> stats_paths;
  CLI::App* stats_cmd = app.add_subcommand(
      "stats", "Operator usage histogram over sequence files as JSON");
  stats_cmd->add_option("files", stats_paths, "Sequence JSON files")
      ->required()
      ->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 6;
  }

  try {
    if (*trace_cmd) return run_trace(trace);
    if (*apply_cmd) return run_apply(apply_args);
    if (*metrics_cmd) return run_metrics(metrics_a, metrics_b);
    if (*synth_cmd) return run_synth(synth);
    if (*stats_cmd) return run_stats(stats_paths);
  } catch (const exie::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const exie::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const exie::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const exie::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const exie::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

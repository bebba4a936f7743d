#include "tumorseg/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"

namespace tumorseg::cli {
namespace {

// Fills option values from a JSON config file; a flag given on the command
// line always wins over the file. Keys mirror long flag names with
// underscores ("--min-pixels" -> "min_pixels"). Unknown keys are an error
// so typos do not silently fall back to defaults.
class ConfigFile {
 public:
  explicit ConfigFile(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    try {
      in >> doc_;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config " + path + ": " + e.what());
    }
    if (!doc_.is_object()) throw ParseError("config " + path + ": top level must be an object");
    path_ = path;
  }

  template <typename T>
  void apply(const char* key, const CLI::Option* opt, T& value) {
    known_.insert(key);
    if (path_.empty() || opt->count() > 0 || !doc_.contains(key)) return;
    try {
      value = doc_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config " + path_ + " key '" + key + "': " + e.what());
    }
  }

  void reject_unknown_keys() const {
    if (path_.empty()) return;
    std::vector<std::string> unknown;
    for (const auto& item : doc_.items())
      if (!known_.count(item.key())) unknown.push_back(item.key());
    if (!unknown.empty()) {
      std::string msg = "config " + path_ + " has unknown keys:";
      for (const std::string& k : unknown) msg += " " + k;
      throw ParseError(msg);
    }
  }

 private:
  nlohmann::json doc_;
  std::string path_;
  std::set<std::string> known_;
};

void add_preprocess(CLI::App& app) {
  auto opts = std::make_shared<PreprocessOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand(
      "preprocess", "Normalize, slice, pack, and resize a dataset; emit masks and box prompts");
  auto* o_dataset = sub->add_option("--dataset", opts->dataset, "Decathlon-style dataset root");
  auto* o_out = sub->add_option("--out", opts->out, "output directory");
  auto* o_method =
      sub->add_option("--method", opts->method, "channel packing: combined|repeated|pca");
  auto* o_modality =
      sub->add_option("--modality", opts->modality, "modality for method=repeated");
  auto* o_lo = sub->add_option("--clip-low", opts->clip_low, "lower clip percentile");
  auto* o_hi = sub->add_option("--clip-high", opts->clip_high, "upper clip percentile");
  auto* o_size = sub->add_option("--size", opts->size, "output edge length; 0 keeps native");
  auto* o_split = sub->add_option("--split", opts->split, "split JSON restricting the cases");
  auto* o_subset = sub->add_option("--subset", opts->subset, "train|test|all (needs --split)");
  auto* o_threads = sub->add_option("--threads", opts->threads, "worker threads; 0 = auto");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("dataset", o_dataset, opts->dataset);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("method", o_method, opts->method);
    cfg.apply("modality", o_modality, opts->modality);
    cfg.apply("clip_low", o_lo, opts->clip_low);
    cfg.apply("clip_high", o_hi, opts->clip_high);
    cfg.apply("size", o_size, opts->size);
    cfg.apply("split", o_split, opts->split);
    cfg.apply("subset", o_subset, opts->subset);
    cfg.apply("threads", o_threads, opts->threads);
    cfg.reject_unknown_keys();
    run_preprocess(*opts);
  });
}

void add_split(CLI::App& app) {
  auto opts = std::make_shared<SplitOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub =
      app.add_subcommand("split", "Shuffle cases under a seed and write the train/test split");
  auto* o_dataset = sub->add_option("--dataset", opts->dataset, "Decathlon-style dataset root");
  auto* o_out = sub->add_option("--out", opts->out, "split JSON path to write");
  auto* o_frac = sub->add_option("--train-frac", opts->train_frac, "train fraction in (0,1)");
  auto* o_seed = sub->add_option("--seed", opts->seed, "shuffle seed");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("dataset", o_dataset, opts->dataset);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("train_frac", o_frac, opts->train_frac);
    cfg.apply("seed", o_seed, opts->seed);
    cfg.reject_unknown_keys();
    run_split(*opts);
  });
}

void add_augment_preview(CLI::App& app) {
  auto opts = std::make_shared<AugmentPreviewOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand(
      "augment-preview", "Draw augmentation samples of one image and write before/after pairs");
  auto* o_image = sub->add_option("--image", opts->image, "input PNG (gray or RGB)");
  auto* o_mask = sub->add_option("--mask", opts->mask, "optional mask PNG augmented alongside");
  auto* o_out = sub->add_option("--out", opts->out, "output directory");
  auto* o_count = sub->add_option("--count", opts->count, "number of samples");
  auto* o_seed = sub->add_option("--seed", opts->seed, "master seed");
  auto* o_epoch = sub->add_option("--epoch", opts->epoch, "epoch index in the seed derivation");
  auto* o_rot = sub->add_option("--rotation-max", opts->rotation_max, "max |angle| in degrees");
  auto* o_prot = sub->add_option("--p-rotate", opts->p_rotate, "rotation probability");
  auto* o_pel = sub->add_option("--p-elastic", opts->p_elastic, "elastic probability");
  auto* o_alpha = sub->add_option("--elastic-alpha", opts->alpha, "displacement scale, pixels");
  auto* o_sigma = sub->add_option("--elastic-sigma", opts->sigma, "smoothing sigma, pixels");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("image", o_image, opts->image);
    cfg.apply("mask", o_mask, opts->mask);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("count", o_count, opts->count);
    cfg.apply("seed", o_seed, opts->seed);
    cfg.apply("epoch", o_epoch, opts->epoch);
    cfg.apply("rotation_max", o_rot, opts->rotation_max);
    cfg.apply("p_rotate", o_prot, opts->p_rotate);
    cfg.apply("p_elastic", o_pel, opts->p_elastic);
    cfg.apply("elastic_alpha", o_alpha, opts->alpha);
    cfg.apply("elastic_sigma", o_sigma, opts->sigma);
    cfg.reject_unknown_keys();
    run_augment_preview(*opts);
  });
}

void add_evaluate(CLI::App& app) {
  auto opts = std::make_shared<EvaluateOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand(
      "evaluate", "Score predictions against ground truth and write the report");
  auto* o_dataset = sub->add_option("--dataset", opts->dataset, "Decathlon-style dataset root");
  auto* o_split = sub->add_option("--split", opts->split, "split JSON");
  auto* o_out = sub->add_option("--out", opts->out, "output directory");
  auto* o_pred =
      sub->add_option("--pred", opts->preds, "prediction source TAG=DIR; repeatable");
  auto* o_subset = sub->add_option("--subset", opts->subset, "train|test|all");
  auto* o_min = sub->add_option("--min-pixels", opts->min_pixels, "slice admission threshold");
  auto* o_filter = sub->add_option("--filter", opts->filter, "all_rois|target_roi");
  auto* o_srow = sub->add_option("--spacing-row", opts->spacing_row, "row pixel spacing");
  auto* o_scol = sub->add_option("--spacing-col", opts->spacing_col, "column pixel spacing");
  auto* o_threads = sub->add_option("--threads", opts->threads, "worker threads; 0 = auto");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("dataset", o_dataset, opts->dataset);
    cfg.apply("split", o_split, opts->split);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("pred", o_pred, opts->preds);
    cfg.apply("subset", o_subset, opts->subset);
    cfg.apply("min_pixels", o_min, opts->min_pixels);
    cfg.apply("filter", o_filter, opts->filter);
    cfg.apply("spacing_row", o_srow, opts->spacing_row);
    cfg.apply("spacing_col", o_scol, opts->spacing_col);
    cfg.apply("threads", o_threads, opts->threads);
    cfg.reject_unknown_keys();
    run_evaluate(*opts);
  });
}

void add_compare(CLI::App& app) {
  auto opts = std::make_shared<CompareOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand(
      "compare", "Wilcoxon signed-rank comparison of two evaluation reports");
  auto* o_a = sub->add_option("report_a", opts->report_a, "first report JSON");
  auto* o_b = sub->add_option("report_b", opts->report_b, "second report JSON");
  auto* o_out = sub->add_option("--out", opts->out, "comparison JSON path to write");
  auto* o_ma = sub->add_option("--model-a", opts->model_a, "model tag in report A");
  auto* o_mb = sub->add_option("--model-b", opts->model_b, "model tag in report B");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("report_a", o_a, opts->report_a);
    cfg.apply("report_b", o_b, opts->report_b);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("model_a", o_ma, opts->model_a);
    cfg.apply("model_b", o_mb, opts->model_b);
    cfg.reject_unknown_keys();
    run_compare(*opts);
  });
}

void add_render(CLI::App& app) {
  auto opts = std::make_shared<RenderOpts>();
  auto config_path = std::make_shared<std::string>();
  CLI::App* sub = app.add_subcommand(
      "render", "Overlay predictions on preprocessed slices: TP green, FP yellow, FN pink");
  auto* o_dataset = sub->add_option("--dataset", opts->dataset, "Decathlon-style dataset root");
  auto* o_split = sub->add_option("--split", opts->split, "split JSON");
  auto* o_slices = sub->add_option("--slices", opts->slices, "preprocessed slice PNG directory");
  auto* o_out = sub->add_option("--out", opts->out, "output directory");
  auto* o_pred =
      sub->add_option("--pred", opts->preds, "prediction source TAG=DIR; repeatable");
  auto* o_subset = sub->add_option("--subset", opts->subset, "train|test|all");
  auto* o_min = sub->add_option("--min-pixels", opts->min_pixels, "slice admission threshold");
  auto* o_filter = sub->add_option("--filter", opts->filter, "all_rois|target_roi");
  auto* o_roi = sub->add_option("--roi", opts->roi, "restrict to one ROI token");
  auto* o_darken = sub->add_option("--darken", opts->darken, "background darken factor");
  auto* o_alpha = sub->add_option("--alpha", opts->alpha, "region blend alpha");
  auto* o_threads = sub->add_option("--threads", opts->threads, "worker threads; 0 = auto");
  sub->add_option("--config", *config_path, "JSON config; flags override its values");
  sub->callback([=]() {
    ConfigFile cfg(*config_path);
    cfg.apply("dataset", o_dataset, opts->dataset);
    cfg.apply("split", o_split, opts->split);
    cfg.apply("slices", o_slices, opts->slices);
    cfg.apply("out", o_out, opts->out);
    cfg.apply("pred", o_pred, opts->preds);
    cfg.apply("subset", o_subset, opts->subset);
    cfg.apply("min_pixels", o_min, opts->min_pixels);
    cfg.apply("filter", o_filter, opts->filter);
    cfg.apply("roi", o_roi, opts->roi);
    cfg.apply("darken", o_darken, opts->darken);
    cfg.apply("alpha", o_alpha, opts->alpha);
    cfg.apply("threads", o_threads, opts->threads);
    cfg.reject_unknown_keys();
    run_render(*opts);
  });
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"brain-tumor segmentation evaluation toolkit"};
  app.require_subcommand(1);
  add_preprocess(app);
  add_split(app);
  add_augment_preview(app);
  add_evaluate(app);
  add_compare(app);
  add_render(app);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("tumorseg");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {  // covers ParseError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace tumorseg::cli

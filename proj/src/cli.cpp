#include "atomnli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>

#include "atomnli/aggregate.hpp"
#include "atomnli/construct.hpp"
#include "atomnli/evaluate.hpp"
#include "atomnli/io.hpp"

namespace atomnli {

namespace {

namespace fs = std::filesystem;

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const BackendError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::string resolve(const GlobalArgs& global, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(global.workdir) / path).lexically_normal().string();
}

RunConfig load_config(const GlobalArgs& global) {
  if (global.config_path.empty()) return RunConfig{};
  return load_run_config(resolve(global, global.config_path), global.workdir);
}

void print_histogram(const SplitStats& stats, std::ostream& out) {
  out << "# Atoms  # Instances\n";
  for (const auto& [atoms, count] : stats.atom_histogram) {
    out << std::left << std::setw(9) << atoms << count << '\n';
  }
  out << std::left << std::setw(9) << "Total" << stats.total << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write " + path);
  file << content;
}

}  // namespace

int cmd_decompose(const GlobalArgs& global, const std::string& input, const std::string& output,
                  std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const RunConfig config = load_config(global);
    const auto decomposer = make_decomposer_backend(config.decomposer);

    const std::vector<SentenceInstance> instances = read_snli_jsonl(resolve(global, input));
    if (instances.empty()) throw InvalidInput(input + " contains no instances");

    const TestBuildResult result =
        build_test_split(instances, *decomposer, config.pipeline, config.workers);
    if (result.dropped > 0) {
      err << "dropped " << result.dropped << " instances with invalid decompositions\n";
    }
    if (result.split.grouped.empty()) {
      throw InvalidInput("every decomposition was invalid; nothing to write");
    }

    write_grouped_jsonl(resolve(global, output), result.split.grouped);
    print_histogram(stats(result.split), out);
    return 0;
  });
}

int cmd_build(const GlobalArgs& global, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    if (global.config_path.empty()) throw InvalidInput("build requires --config");
    const RunConfig config = load_config(global);
    if (config.input.empty()) throw InvalidInput("config: io.input is required for build");

    const auto decomposer = make_decomposer_backend(config.decomposer);

    const std::vector<SentenceInstance> raw = read_snli_jsonl(config.input);
    if (raw.empty()) throw InvalidInput(config.input + " contains no instances");

    const TestBuildResult decomposed =
        build_test_split(raw, *decomposer, config.pipeline, config.workers);
    if (decomposed.dropped > 0) {
      err << "dropped " << decomposed.dropped << " instances with invalid decompositions\n";
    }
    const std::vector<SentenceInstance>& instances = decomposed.split.grouped;
    if (instances.empty()) throw InvalidInput("every decomposition was invalid; nothing to build");

    fs::create_directories(config.output_dir);
    const fs::path out_dir(config.output_dir);

    DatasetSplit split;
    if (config.split == "test") {
      split = decomposed.split;
    } else {
      const auto classifier = make_classifier_backend(config.classifier);

      std::vector<AtomicInstance> entail;
      if (config.branches.entailment) {
        std::vector<SentenceInstance> gold_entailment;
        for (const SentenceInstance& instance : instances) {
          if (instance.gold == Label::entailment) gold_entailment.push_back(instance);
        }
        entail = build_entailment_pairs(gold_entailment, *classifier, config.pipeline,
                                        config.workers);
      }

      std::vector<AtomicInstance> neutral;
      if (config.branches.neutral) {
        const AtomCorpus corpus(instances, config.pipeline.bm25_k1, config.pipeline.bm25_b);
        neutral =
            build_neutral_pairs(instances, *classifier, corpus, config.pipeline, config.workers);
      }

      std::vector<AtomicInstance> contra;
      if (config.branches.contradiction) {
        std::shared_ptr<const Generator> generator;
        Ensemble ensemble;
        if (config.branches.generation) {
          generator = make_generator_backend(config.generator);
          ensemble = make_ensemble_backend(config);
        }
        contra = build_contradiction_pairs(instances, *classifier, ensemble, generator.get(),
                                           config.pipeline, config.workers, &err);
      }

      split = assemble(entail, neutral, contra, config.pipeline,
                       parse_split_name(config.split));
    }

    const fs::path split_path = out_dir / (config.split + ".jsonl");
    if (config.split == "test") {
      write_grouped_jsonl(split_path.string(), split.grouped);
    } else {
      write_atomic_jsonl(split_path.string(), split.atomic);
    }

    const SplitStats split_stats = stats(split);
    write_text_file((out_dir / (config.split + ".stats.json")).string(),
                    stats_to_json(split_stats).dump(2) + "\n");
    write_text_file((out_dir / "config.effective.json").string(),
                    run_config_to_json(config).dump(2) + "\n");

    out << "wrote " << split_path.string() << " (" << split_stats.total << " instances)\n";
    return 0;
  });
}

int cmd_eval(const GlobalArgs& global, const EvalArgs& args, std::ostream& out,
             std::ostream& err) {
  return run_guarded(err, [&] {
    const RunConfig config = load_config(global);
    const auto classifier = make_classifier_backend(config.classifier);

    const EvalMode mode = parse_eval_mode(args.mode);
    const bool need_atoms = args.compare || mode != EvalMode::sentence;
    const std::vector<SentenceInstance> test =
        read_grouped_jsonl(resolve(global, args.test_path), need_atoms);
    if (test.empty()) throw InvalidInput(args.test_path + " contains no instances");

    EvalOptions options;
    options.stratum_cap = config.pipeline.max_atoms;
    options.workers = config.workers;

    if (args.compare) {
      const ModeComparison comparison = compare_modes(test, *classifier, options);
      out << comparison_to_text(comparison);
      if (!args.output_json.empty()) {
        write_text_file(resolve(global, args.output_json),
                        comparison_to_json(comparison).dump(2) + "\n");
      }
      if (!args.output_csv.empty()) {
        std::string csv = report_to_csv(comparison.strict_report);
        csv += report_to_csv(comparison.sum_report);
        csv += report_to_csv(comparison.sentence_report);
        write_text_file(resolve(global, args.output_csv), csv);
      }
    } else {
      const EvalReport report = stratified_eval(test, *classifier, mode, options);
      out << report_to_text(report);
      if (!args.output_json.empty()) {
        write_text_file(resolve(global, args.output_json), report_to_json(report).dump(2) + "\n");
      }
      if (!args.output_csv.empty()) {
        write_text_file(resolve(global, args.output_csv), report_to_csv(report));
      }
    }
    return 0;
  });
}

int judge_and_print(const Backends& backends, const JudgeArgs& args, int workers,
                    std::ostream& out) {
  const std::vector<AtomicFact> atoms =
      backends.decomposer->decompose(args.hypothesis, "cli");
  const Verdict verdict =
      judge(args.premise, atoms, *backends.classifier, parse_aggregation_mode(args.mode), workers);

  if (args.as_json) {
    out << verdict_to_json(verdict).dump(2) << '\n';
    return 0;
  }
  out << "premise:    " << args.premise << '\n';
  out << "hypothesis: " << args.hypothesis << '\n';
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const LabelDistribution& dist = verdict.atom_dists[i];
    out << "atom " << i << "  " << std::left << std::setw(14)
        << to_string(verdict.atom_labels[i]) << std::fixed << std::setprecision(3)
        << "p_e=" << dist.p_e << " p_n=" << dist.p_n << " p_c=" << dist.p_c << "  "
        << atoms[i].text << '\n';
  }
  if (verdict.summed) {
    out << "summed scores: s_e=" << verdict.summed->s_e << " s_n=" << verdict.summed->s_n
        << " s_c=" << verdict.summed->s_c << '\n';
  }
  out << "aggregated (" << to_string(verdict.mode) << "): " << to_string(verdict.aggregated)
      << '\n';
  return 0;
}

int cmd_judge(const GlobalArgs& global, const JudgeArgs& args, std::ostream& out,
              std::ostream& err) {
  return run_guarded(err, [&] {
    if (trim(args.hypothesis).empty()) throw InvalidInput("judge: empty hypothesis");
    const RunConfig config = load_config(global);
    Backends backends;
    backends.classifier = make_classifier_backend(config.classifier);
    backends.decomposer = make_decomposer_backend(config.decomposer);
    return judge_and_print(backends, args, config.workers, out);
  });
}

int cmd_stats(const GlobalArgs& global, const std::string& input, const std::string& output,
              std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const std::string path = resolve(global, input);

    // sniff the schema from the first data line
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InvalidInput("cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    bool atomic = false;
    bool found = false;
    while (std::getline(file, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto parsed = nlohmann::json::parse(line, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object()) {
        throw InvalidInput(path + ": line " + std::to_string(line_no) +
                           " is not a JSON object");
      }
      atomic = parsed.contains("atom") && parsed.contains("provenance");
      found = true;
      break;
    }
    if (!found) throw InvalidInput(path + " contains no instances");

    DatasetSplit split;
    if (atomic) {
      split.name = SplitName::train;
      split.atomic = read_atomic_jsonl(path);
    } else {
      split.name = SplitName::test;
      split.grouped = read_grouped_jsonl(path, false);
    }

    const SplitStats split_stats = stats(split);
    if (!split_stats.atom_histogram.empty()) print_histogram(split_stats, out);
    out << stats_to_json(split_stats).dump(2) << '\n';
    if (!output.empty()) {
      write_text_file(resolve(global, output), stats_to_json(split_stats).dump(2) + "\n");
    }
    return 0;
  });
}

}  // namespace atomnli

// fnav: scene generation, dataset generation, single episodes and benchmarks.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fnav/datagen.hpp"
#include "fnav/harness.hpp"
#include "fnav/scene_io.hpp"

namespace {

using namespace fnav;

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

world::TaskKind parse_task(const std::string& text) {
  if (text == "objectnav") return world::TaskKind::ObjectNav;
  if (text == "imagenav") return world::TaskKind::ImageNav;
  throw Error(ErrorCode::InvalidArgument, "task must be objectnav or imagenav, got '" + text + "'");
}

struct GenScenes {
  std::uint64_t seed = 0;
  int count = 1;
  std::string out;
  int width = 96;
  int height = 96;
  std::string categories;

  int run() const {
    world::SceneParams params;
    params.width = width;
    params.height = height;
    if (!categories.empty()) params.categories = split_csv(categories);
    for (int i = 0; i < count; ++i) {
      const auto scene = world::generate_scene(mix_seed(seed, static_cast<std::uint64_t>(i)), params);
      world::save_scene(scene, std::filesystem::path(out) / (scene.id() + ".json"));
      std::cout << scene.id() << "\n";
    }
    return 0;
  }
};

struct GenData {
  std::string scenes;
  std::string mixture = "objectnav=260,ovon=260,imagenav=400,aux=300";
  std::uint64_t seed = 0;
  std::string out;
  bool per_step = false;

  int run() const {
    const auto scene_list = world::load_scene_dir(scenes);
    datagen::DatasetConfig cfg;
    cfg.seed = seed;
    cfg.mixture = datagen::MixtureConfig::parse(mixture, seed);
    cfg.rollout.per_step = per_step;
    const auto manifest = datagen::generate_dataset(scene_list, cfg, out);
    for (const auto& [kind, n] : manifest.counts) {
      std::cout << datagen::to_string(kind) << ": " << n << " / " << manifest.requested.at(kind) << "\n";
    }
    return 0;
  }
};

policy::PolicySpec make_policy(const std::string& text, int timeout_ms, bool expose_labels) {
  auto p = policy::parse_policy(text);
  p.timeout_ms = timeout_ms;
  p.expose_labels = expose_labels;
  return p;
}

struct Run {
  std::string scene;
  std::uint64_t episode_seed = 0;
  std::string policy = "nearest";
  std::string replan = "arrival";
  std::string snapshot_dir;
  std::string task = "objectnav";
  int timeout_ms = 5000;
  bool expose_labels = false;

  int run() const {
    const auto s = world::load_scene(scene);
    const auto ep = world::sample_episode(s, episode_seed, parse_task(task));
    harness::RuntimeConfig cfg;
    cfg.replan = harness::parse_replan(replan);
    if (!snapshot_dir.empty()) cfg.snapshot_dir = snapshot_dir;
    const auto result = harness::run_episode(s, ep, make_policy(policy, timeout_ms, expose_labels), cfg);
    std::cout << harness::episode_to_json(result);
    return 0;
  }
};

struct Bench {
  std::string scenes;
  int episodes_per_scene = 1;
  std::string policies = "nearest,oracle";
  std::string out;
  std::string table;
  std::string replan = "arrival";
  std::string task = "objectnav";
  int timeout_ms = 5000;
  int threads = 1;
  bool expose_labels = false;

  int run() const {
    const auto scene_list = world::load_scene_dir(scenes);
    harness::BenchmarkConfig cfg;
    cfg.episodes_per_scene = episodes_per_scene;
    cfg.task_kind = parse_task(task);
    cfg.runtime.replan = harness::parse_replan(replan);
    cfg.threads = threads;
    for (const auto& s : scene_list) cfg.scene_seeds.push_back(s.seed());
    std::vector<policy::PolicySpec> specs;
    for (const auto& p : split_csv(policies)) specs.push_back(make_policy(p, timeout_ms, expose_labels));

    const auto report = harness::run_benchmark(scene_list, specs, cfg);
    write_file(out, harness::report_to_json(report));
    const std::string text = harness::report_to_table(report);
    if (!table.empty()) write_file(table, text);
    std::cout << text;
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fnav: frontier navigation toolkit"};
  app.require_subcommand(1);

  GenScenes gs;
  auto* gen_scenes = app.add_subcommand("gen-scenes", "Generate procedural scenes as JSON files");
  gen_scenes->add_option("--seed", gs.seed, "Base seed")->required();
  gen_scenes->add_option("--count", gs.count, "Number of scenes")->required()->check(CLI::PositiveNumber);
  gen_scenes->add_option("--out", gs.out, "Output directory")->required();
  gen_scenes->add_option("--width", gs.width, "Width in cells")->check(CLI::PositiveNumber);
  gen_scenes->add_option("--height", gs.height, "Height in cells")->check(CLI::PositiveNumber);
  gen_scenes->add_option("--categories", gs.categories, "Comma separated object categories");

  GenData gd;
  auto* gen_data = app.add_subcommand("gen-data", "Generate the supervised dataset");
  gen_data->add_option("--scenes", gd.scenes, "Scene directory")->required();
  gen_data->add_option("--mixture", gd.mixture, "objectnav=N,ovon=N,imagenav=N,aux=N");
  gen_data->add_option("--seed", gd.seed, "Dataset seed")->required();
  gen_data->add_option("--out", gd.out, "Output directory")->required();
  gen_data->add_flag("--per-step", gd.per_step, "Emit a navigation sample at every step");

  Run rn;
  auto* run = app.add_subcommand("run", "Run one episode and print its result");
  run->add_option("--scene", rn.scene, "Scene JSON file")->required();
  run->add_option("--episode-seed", rn.episode_seed, "Episode sampling seed")->required();
  run->add_option("--policy", rn.policy, "nearest | random[:SEED] | oracle | greedy | external:URL");
  run->add_option("--replan", rn.replan, "arrival | step | n:K");
  run->add_option("--snapshot-dir", rn.snapshot_dir, "Write a PPM of the belief map per step");
  run->add_option("--task", rn.task, "objectnav | imagenav");
  run->add_option("--timeout-ms", rn.timeout_ms, "External policy timeout")->check(CLI::PositiveNumber);
  run->add_flag("--expose-labels", rn.expose_labels, "Send the oracle letter to external policies");

  Bench bn;
  auto* bench = app.add_subcommand("bench", "Benchmark policies over sampled episodes");
  bench->add_option("--scenes", bn.scenes, "Scene directory")->required();
  bench->add_option("--episodes-per-scene", bn.episodes_per_scene, "Episodes per scene")
      ->required()
      ->check(CLI::PositiveNumber);
  bench->add_option("--policies", bn.policies, "Comma separated policies");
  bench->add_option("--out", bn.out, "Report JSON path")->required();
  bench->add_option("--table", bn.table, "Also write the text table here");
  bench->add_option("--replan", bn.replan, "arrival | step | n:K");
  bench->add_option("--task", bn.task, "objectnav | imagenav");
  bench->add_option("--timeout-ms", bn.timeout_ms, "External policy timeout")->check(CLI::PositiveNumber);
  bench->add_option("--threads", bn.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--expose-labels", bn.expose_labels, "Send the oracle letter to external policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen_scenes) return gs.run();
    if (*gen_data) return gd.run();
    if (*run) return rn.run();
    if (*bench) return bn.run();
  } catch (const fnav::Error& e) {
    const bool usage = e.code() == ErrorCode::InvalidArgument;
    std::cerr << "fnav: " << e.what() << "\n";
    return usage ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "fnav: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

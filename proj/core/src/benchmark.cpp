#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "fnav/harness.hpp"
#include "json.hpp"

namespace fnav::harness {

using ojson = nlohmann::ordered_json;

std::vector<world::EpisodeSpec> benchmark_episodes(std::span<const world::Scene> scenes, int episodes_per_scene,
                                                   world::TaskKind kind, const world::EpisodeSampling& sampling) {
  constexpr int kSaltRetries = 8;
  std::vector<world::EpisodeSpec> out;
  for (const auto& scene : scenes) {
    for (int i = 0; i < episodes_per_scene; ++i) {
      // A scene can occasionally fail a draw; later salts keep the list deterministic.
      for (int retry = 0;; ++retry) {
        const std::uint64_t seed = mix_seed(scene.seed(), static_cast<std::uint64_t>(i) + 1000003ULL * retry);
        try {
          out.push_back(world::sample_episode(scene, seed, kind, sampling));
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::SamplingFailed || retry + 1 >= kSaltRetries) throw;
        }
      }
    }
  }
  return out;
}

BenchmarkReport run_benchmark(std::span<const world::Scene> scenes, std::span<const policy::PolicySpec> policies,
                              const BenchmarkConfig& cfg) {
  if (scenes.empty() || cfg.episodes_per_scene < 1 || policies.empty()) {
    throw Error(ErrorCode::EmptyBenchmark, "benchmark needs at least one scene, episode and policy");
  }
  cfg.runtime.validate();
  const auto episodes = benchmark_episodes(scenes, cfg.episodes_per_scene, cfg.task_kind, cfg.sampling);

  BenchmarkReport report;
  for (const auto& s : scenes) report.seeds.push_back(s.seed());
  std::ostringstream desc;
  desc.precision(17);
  desc << cfg.runtime.describe() << ";episodes_per_scene=" << cfg.episodes_per_scene
       << ";task=" << (cfg.task_kind == world::TaskKind::ObjectNav ? "objectnav" : "imagenav")
       << ";min_geodesic=" << cfg.sampling.min_geodesic << ";inflate=" << cfg.sampling.inflate_radius << ";seeds=";
  for (const auto s : report.seeds) desc << s << ',';
  desc << ";policies=";
  for (const auto& p : policies) desc << p.name() << ',';
  report.config_hash = sha256_hex(desc.str());

  auto scene_for = [&](const world::EpisodeSpec& ep) -> const world::Scene& {
    for (const auto& s : scenes)
      if (s.id() == ep.scene_id) return s;
    throw Error(ErrorCode::InvalidArgument, "no scene " + ep.scene_id);
  };

  const std::size_t jobs = episodes.size() * policies.size();
  std::vector<EpisodeResult> results(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const auto& ep = episodes[j % episodes.size()];
      const auto& pol = policies[j / episodes.size()];
      try {
        results[j] = run_episode(scene_for(ep), ep, pol, cfg.runtime);
      } catch (const std::exception& e) {
        results[j] = EpisodeResult{};
        results[j].episode_id = ep.episode_id;
        results[j].termination = Termination::Stuck;
        results[j].error = e.what();
      }
    }
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t p = 0; p < policies.size(); ++p) {
    PolicyReport pr;
    pr.name = policies[p].name();
    pr.episodes.assign(results.begin() + static_cast<std::ptrdiff_t>(p * episodes.size()),
                       results.begin() + static_cast<std::ptrdiff_t>((p + 1) * episodes.size()));
    pr.episode_count = static_cast<int>(pr.episodes.size());
    pr.sr = compute_sr(pr.episodes);
    pr.spl = compute_spl(pr.episodes);
    double steps = 0.0;
    for (const auto& r : pr.episodes) steps += r.steps;
    pr.mean_steps = steps / pr.episode_count;
    report.policies.push_back(std::move(pr));
  }
  return report;
}

namespace {

char action_code(world::Action a) {
  switch (a) {
    case world::Action::Forward: return 'F';
    case world::Action::TurnLeft: return 'L';
    case world::Action::TurnRight: return 'R';
    case world::Action::Stop: return 'S';
  }
  return '?';
}

ojson episode_json(const EpisodeResult& r) {
  ojson decisions = ojson::array();
  for (const auto& d : r.decisions) {
    ojson j{{"step", d.step}, {"letter", d.letter}, {"frontier_id", d.frontier_id}, {"offered", d.offered},
            {"fallback", d.fallback}};
    if (!d.note.empty()) j["note"] = d.note;
    decisions.push_back(std::move(j));
  }
  std::string actions;
  for (const auto a : r.actions) actions.push_back(action_code(a));
  ojson j{{"episode_id", r.episode_id},
          {"success", r.success ? 1 : 0},
          {"agent_path_length", r.agent_path_length},
          {"shortest_path_length", r.shortest_path_length},
          {"spl", r.spl_term()},
          {"steps", r.steps},
          {"termination", std::string(to_string(r.termination))},
          {"collisions", r.collisions},
          {"fallbacks", r.fallbacks},
          {"actions", actions},
          {"decisions", std::move(decisions)}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

std::string episode_to_json(const EpisodeResult& result) { return episode_json(result).dump(1) + "\n"; }

std::string report_to_json(const BenchmarkReport& report) {
  ojson j;
  j["config_hash"] = report.config_hash;
  j["seeds"] = report.seeds;
  ojson policies = ojson::array();
  for (const auto& p : report.policies) {
    ojson eps = ojson::array();
    for (const auto& r : p.episodes) eps.push_back(episode_json(r));
    policies.push_back({{"name", p.name},
                        {"sr", p.sr},
                        {"spl", p.spl},
                        {"episode_count", p.episode_count},
                        {"mean_steps", p.mean_steps},
                        {"episodes", std::move(eps)}});
  }
  j["policies"] = std::move(policies);
  return j.dump(1) + "\n";
}

std::string report_to_table(const BenchmarkReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-32s %8s %8s %8s %10s\n", "policy", "episodes", "SR", "SPL", "mean_steps");
  out += line;
  for (const auto& p : report.policies) {
    std::snprintf(line, sizeof(line), "%-32s %8d %8.4f %8.4f %10.1f\n", p.name.c_str(), p.episode_count, p.sr, p.spl,
                  p.mean_steps);
    out += line;
  }
  return out;
}

}  // namespace fnav::harness

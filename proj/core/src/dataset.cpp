#include <cmath>
#include <sstream>

#include "fnav/datagen.hpp"
#include "json.hpp"

namespace fnav::datagen {

using ojson = nlohmann::ordered_json;

MixtureConfig MixtureConfig::default_ratio(double scale, std::uint64_t seed) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "mixture scale must be > 0");
  MixtureConfig m;
  m.seed = seed;
  m.counts = {{SampleKind::ObjectNav, static_cast<int>(std::lround(26000 * scale))},
              {SampleKind::Ovon, static_cast<int>(std::lround(26000 * scale))},
              {SampleKind::ImageNav, static_cast<int>(std::lround(40000 * scale))},
              {SampleKind::AuxSpatial, static_cast<int>(std::lround(30000 * scale))}};
  return m;
}

MixtureConfig MixtureConfig::parse(const std::string& text, std::uint64_t seed) {
  MixtureConfig m;
  m.seed = seed;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "mixture entry '" + item + "' lacks '='");
    const SampleKind kind = parse_sample_kind(item.substr(0, eq));
    int count = -1;
    try {
      std::size_t used = 0;
      count = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) count = -1;
    } catch (const std::exception&) {
      count = -1;
    }
    if (count < 0) throw Error(ErrorCode::InvalidArgument, "mixture count in '" + item + "' must be an integer >= 0");
    m.counts[kind] = count;
  }
  if (m.counts.empty()) throw Error(ErrorCode::InvalidArgument, "empty mixture");
  return m;
}

void MixtureConfig::validate() const {
  for (const auto& [kind, n] : counts)
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative count for " + std::string(to_string(kind)));
}

std::string DatasetManifest::to_json() const {
  ojson j;
  ojson c = ojson::object(), r = ojson::object(), t = ojson::object();
  for (const auto& [kind, n] : requested) {
    const int got = counts.contains(kind) ? counts.at(kind) : 0;
    c[std::string(to_string(kind))] = got;
    r[std::string(to_string(kind))] = n;
    t[std::string(to_string(kind))] = got < n;
  }
  j["counts"] = std::move(c);
  j["requested"] = std::move(r);
  j["truncated"] = std::move(t);
  j["seeds"] = seeds;
  j["config_hash"] = config_hash;
  j["files"] = file_sha256;
  return j.dump(2) + "\n";
}

DatasetManifest write_dataset(const std::map<SampleKind, std::vector<TrainingSample>>& streams,
                              const MixtureConfig& mixture, const std::filesystem::path& out_dir,
                              const std::string& config_description,
                              const std::map<std::string, std::uint64_t>& extra_seeds) {
  mixture.validate();
  DatasetManifest manifest;
  manifest.seeds = extra_seeds;
  manifest.seeds["mixture"] = mixture.seed;

  std::vector<const TrainingSample*> combined;
  for (const auto kind : kAllSampleKinds) {
    const int want = mixture.counts.contains(kind) ? mixture.counts.at(kind) : 0;
    manifest.requested[kind] = want;
    const auto it = streams.find(kind);
    const std::size_t have = it == streams.end() ? 0 : it->second.size();
    const std::size_t take = std::min(have, static_cast<std::size_t>(want));
    manifest.counts[kind] = static_cast<int>(take);

    std::string body;
    for (std::size_t i = 0; i < take; ++i) {
      body += sample_to_json(it->second[i]);
      body += '\n';
      combined.push_back(&it->second[i]);
    }
    const std::string name = std::string(to_string(kind)) + ".jsonl";
    write_file(out_dir / name, body);
    manifest.file_sha256[name] = sha256_hex(body);
  }

  std::mt19937_64 rng(mixture.seed);
  stable_shuffle(combined, rng);
  std::string body;
  for (const auto* s : combined) {
    body += sample_to_json(*s);
    body += '\n';
  }
  write_file(out_dir / "combined.jsonl", body);
  manifest.file_sha256["combined.jsonl"] = sha256_hex(body);

  std::ostringstream desc;
  desc << config_description << ";mixture=";
  for (const auto& [kind, n] : manifest.requested) desc << to_string(kind) << '=' << n << ',';
  desc << ";mixture_seed=" << mixture.seed;
  manifest.config_hash = sha256_hex(desc.str());
  write_file(out_dir / "manifest.json", manifest.to_json());
  return manifest;
}

std::string DatasetConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "seed=" << seed << ";seen=";
  for (const auto& c : seen_categories) os << c << ',';
  os << ";unseen=";
  for (const auto& c : unseen_categories) os << c << ',';
  os << ";min_geodesic=" << sampling.min_geodesic << ";inflate=" << sampling.inflate_radius
     << ";runtime=" << rollout.runtime.describe() << ";switch=" << rollout.oracle.goal_switch_distance
     << ";per_step=" << rollout.per_step << ";aux=" << aux.candidates << ',' << aux.match_tolerance << ','
     << aux.distractor_separation << ',' << aux.samples_per_trajectory << ',' << aux.segment_frames << ','
     << aux.max_history_frames << ";max_episodes=" << max_episodes_per_kind;
  return os.str();
}

namespace {

int want(const DatasetConfig& cfg, SampleKind kind) {
  return cfg.mixture.counts.contains(kind) ? cfg.mixture.counts.at(kind) : 0;
}

}  // namespace

std::map<SampleKind, std::vector<TrainingSample>> generate_streams(std::span<const world::Scene> scenes,
                                                                   const DatasetConfig& cfg) {
  if (scenes.empty()) throw Error(ErrorCode::InvalidArgument, "dataset generation needs at least one scene");
  cfg.mixture.validate();
  cfg.aux.validate();
  std::map<SampleKind, std::vector<TrainingSample>> streams;
  auto& aux = streams[SampleKind::AuxSpatial];
  const int aux_want = want(cfg, SampleKind::AuxSpatial);
  AuxParams aux_params = cfg.aux;
  aux_params.seed = mix_seed(cfg.seed, 0xA0A0ULL);

  auto harvest_aux = [&](const Trajectory& t) {
    if (static_cast<int>(aux.size()) >= aux_want) return;
    try {
      for (auto& s : generate_aux_samples(t, aux_params)) {
        if (static_cast<int>(aux.size()) >= aux_want) break;
        aux.push_back(std::move(s));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SkippedTrajectory) throw;
    }
  };

  // The trailing AuxSpatial pass only runs when navigation rollouts left the aux stream short.
  const SampleKind passes[] = {SampleKind::ObjectNav, SampleKind::Ovon, SampleKind::ImageNav, SampleKind::AuxSpatial};
  for (std::size_t k = 0; k < std::size(passes); ++k) {
    const SampleKind kind = passes[k];
    auto& stream = streams[kind];
    auto satisfied = [&] {
      return kind == SampleKind::AuxSpatial ? static_cast<int>(aux.size()) >= aux_want
                                            : static_cast<int>(stream.size()) >= want(cfg, kind);
    };
    world::EpisodeSampling sampling = cfg.sampling;
    sampling.turn_step = cfg.rollout.runtime.action.turn_step;
    sampling.categories = kind == SampleKind::Ovon ? cfg.unseen_categories : cfg.seen_categories;
    const world::TaskKind task_kind = kind == SampleKind::ImageNav ? world::TaskKind::ImageNav : world::TaskKind::ObjectNav;

    for (int i = 0; i < cfg.max_episodes_per_kind && !satisfied(); ++i) {
      const auto& scene = scenes[static_cast<std::size_t>(i) % scenes.size()];
      const std::uint64_t seed = mix_seed(mix_seed(cfg.seed, k + 1), static_cast<std::uint64_t>(i));
      world::EpisodeSpec ep;
      try {
        ep = world::sample_episode(scene, seed, task_kind, sampling);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::GoalAbsent || e.code() == ErrorCode::SamplingFailed) continue;
        throw;
      }
      ep.episode_id = scene.id() + "_" + std::string(to_string(kind)) + "_" + std::to_string(seed);
      const Trajectory t = rollout_and_record(scene, ep, cfg.rollout);
      if (kind != SampleKind::AuxSpatial) {
        for (auto& s : navigation_samples(t, kind)) {
          if (static_cast<int>(stream.size()) >= want(cfg, kind)) break;
          stream.push_back(std::move(s));
        }
      }
      harvest_aux(t);
    }
  }
  return streams;
}

DatasetManifest generate_dataset(std::span<const world::Scene> scenes, const DatasetConfig& cfg,
                                 const std::filesystem::path& out_dir) {
  const auto streams = generate_streams(scenes, cfg);
  std::map<std::string, std::uint64_t> seeds{{"dataset", cfg.seed}};
  for (const auto& s : scenes) seeds["scene:" + s.id()] = s.seed();
  return write_dataset(streams, cfg.mixture, out_dir, cfg.describe(), seeds);
}

}  // namespace fnav::datagen

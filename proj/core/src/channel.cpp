#include "deltrace/channel.hpp"

#include <json.hpp>

#include "deltrace/error.hpp"
#include "deltrace/parallel.hpp"

namespace deltrace {

ChannelParams::ChannelParams(double q) : q_(q) {
  require(q > 0.0 && q < 1.0, ErrorKind::InvalidParameter,
          "deletion probability q must lie strictly between 0 and 1");
}

BitString transmit(const BitString& x, const ChannelParams& params, Rng& rng) {
  const double p = params.p();
  std::vector<std::uint8_t> out;
  out.reserve(x.size());
  for (auto bit : x) {
    if (rng.uniform() < p) out.push_back(bit);
  }
  return BitString(std::move(out));
}

BitString transmit(const BitString& x, const ChannelParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return transmit(x, params, rng);
}

BitString transmit_prefix(const BitString& x, const ChannelParams& params, Rng& rng,
                          std::size_t max_length) {
  const double p = params.p();
  std::vector<std::uint8_t> out;
  out.reserve(max_length);
  for (auto bit : x) {
    if (out.size() >= max_length) break;
    if (rng.uniform() < p) out.push_back(bit);
  }
  return BitString(std::move(out));
}

TraceBatch transmit_batch(const BitString& x, const ChannelParams& params, std::size_t count,
                          std::uint64_t seed, unsigned workers, std::string source_label) {
  auto chunks = map_chunks(count, 4096, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<BitString> part;
    part.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      part.push_back(transmit(x, params, rng));
    }
    return part;
  });
  TraceBatch batch;
  batch.traces.reserve(count);
  for (auto& part : chunks) {
    for (auto& t : part) batch.traces.push_back(std::move(t));
  }
  batch.source_label = source_label.empty() ? x.to_string() : std::move(source_label);
  batch.params = params;
  batch.seed = seed;
  return batch;
}

std::string batch_to_json(const TraceBatch& batch) {
  nlohmann::ordered_json j;
  j["source_label"] = batch.source_label;
  j["q"] = batch.params.q();
  j["seed"] = batch.seed;
  j["T"] = batch.traces.size();
  auto& traces = j["traces"] = nlohmann::ordered_json::array();
  for (const auto& t : batch.traces) traces.push_back(t.to_string());
  return j.dump();
}

TraceBatch batch_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    TraceBatch batch;
    batch.source_label = j.at("source_label").get<std::string>();
    batch.params = ChannelParams(j.at("q").get<double>());
    batch.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("traces")) batch.traces.push_back(BitString::parse(t.get<std::string>()));
    require(batch.traces.size() == j.at("T").get<std::size_t>(), ErrorKind::Parse,
            "trace batch T does not match the number of traces");
    return batch;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("malformed trace batch JSON: ") + e.what());
  }
}

}  // namespace deltrace

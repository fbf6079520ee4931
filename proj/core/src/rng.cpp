#include "uavroute/rng.hpp"

#include <sstream>
#include <stdexcept>

namespace uavroute {

std::string RandomStream::serialize() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void RandomStream::deserialize(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (!is) throw std::runtime_error("rng: malformed stream state");
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  // FNV-1a over the name, then mixed with the master seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix_seed(master ^ mix_seed(h));
}

RngStreams::RngStreams(std::uint64_t seed)
    : master_seed(seed),
      mobility(derive_seed(seed, "mobility")),
      traffic(derive_seed(seed, "traffic")),
      channel(derive_seed(seed, "channel-assignment")),
      policy(derive_seed(seed, "policy-sampling")),
      tie_breaking(derive_seed(seed, "tie-breaking")) {}

}  // namespace uavroute

#include <cmath>
#include <string>

#include "bpsim/error.hpp"
#include "bpsim/samplers.hpp"

namespace bpsim {

std::vector<double> ferguson_klass_jumps(const FergusonKlassTail& tail,
                                         std::span<const double> arrivals) {
  std::vector<double> jumps(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    try {
      jumps[i] = tail.inverse(arrivals[i]);
    } catch (const std::exception& e) {
      throw SamplerError(std::string("Ferguson-Klass jump: ") + e.what(), i);
    }
  }
  return jumps;
}

AtomicMeasure sample_ferguson_klass(const FergusonKlassTail& tail, std::size_t n,
                                    RngStream& rng) {
  if (n < 1) throw DomainError("Ferguson-Klass requires n >= 1");
  const auto arrivals = gamma_arrivals(n, rng);
  const auto jumps = ferguson_klass_jumps(tail, arrivals);
  std::vector<Atom> atoms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    try {
      atoms[i] = {tail.location_from_uniform(u, jumps[i]), jumps[i]};
    } catch (const std::exception& e) {
      throw SamplerError(std::string("Ferguson-Klass location: ") + e.what(), i);
    }
  }
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure sample_ferguson_klass(const BetaProcessParams& p, std::size_t n,
                                    RngStream& rng) {
  const FergusonKlassTail tail(p);
  return sample_ferguson_klass(tail, n, rng);
}

}  // namespace bpsim

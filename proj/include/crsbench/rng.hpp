#ifndef CRSBENCH_RNG_HPP
#define CRSBENCH_RNG_HPP

#include <cstdint>

namespace crsbench {

// Counter-based splittable random stream. A draw is a pure function of
// (seed, stream, counter), so identical (seed, stream) values reproduce the
// same sequence bit-exactly on any platform. derive(i) yields a child stream
// that is independent of the parent and of siblings with different indices.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  RngStream derive(std::uint64_t child) const;

  std::uint64_t next_u64();
  double next_double();  // uniform in [0,1), 53 bits

  bool sample_bernoulli(double p);
  double sample_exponential(double rate);            // rate > 0
  int sample_poisson(double lambda);                 // lambda >= 0, CDF inversion
  int sample_truncated_poisson_geq1(double lambda);  // lambda > 0, law of Pois | >= 1

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

}  // namespace crsbench

#endif

#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

#include <Eigen/Dense>

namespace ddrt {

/// 64-bit FNV-1a.
class Fnv1a
{
public:
  void update(const void * data, std::size_t n)
  {
    const auto * p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void update(std::string_view s) { update(s.data(), s.size()); }
  void update(const Eigen::MatrixXd & m)
  {
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    update(dims, sizeof dims);
    update(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  }
  std::uint64_t digest() const { return h_; }

private:
  std::uint64_t h_{0xcbf29ce484222325ULL};
};

}  // namespace ddrt

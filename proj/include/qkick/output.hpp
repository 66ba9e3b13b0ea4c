#pragma once

// Trajectory CSV and summary JSON writers. Files are staged next to their
// destination and renamed into place only once every file of a command has
// been written, so a failed command leaves nothing behind.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "qkick/observables.hpp"
#include "qkick/propagation.hpp"

namespace qkick {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* trajectory_csv_header = "t,re_a0,im_a0,re_a1,im_a1,sx,sy,sz,c_l1";

struct CsvOptions {
  std::size_t stride = 1;
  // Applied to every stored state before writing; 0 leaves the lab frame.
  double frame_frequency = 0.0;
};

/// One row per kept sample; the final sample is always written.
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out,
                                 const CsvOptions& opts = {}) {
  const std::size_t stride = opts.stride == 0 ? 1 : opts.stride;
  out << trajectory_csv_header << '\n';
  const std::size_t n = traj.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k % stride != 0 && k + 1 != n) continue;
    const double t = traj.times[k];
    const QubitState s = opts.frame_frequency != 0.0
                             ? rotating_frame(traj.states[k], t, opts.frame_frequency)
                             : traj.states[k];
    const BlochPoint b = bloch_vector(s);
    const double row[] = {t, s.a0.real(), s.a0.imag(), s.a1.real(), s.a1.imag(),
                          b.x, b.y, b.z, l1_coherence(s)};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out << ',';
      out << format_number(row[i]);
    }
    out << '\n';
  }
}

/// Collects file contents and commits them together.
class StagedFiles {
public:
  StagedFiles() = default;
  StagedFiles(const StagedFiles&) = delete;
  StagedFiles& operator=(const StagedFiles&) = delete;
  ~StagedFiles() { discard(); }

  void add(std::filesystem::path target, std::string contents) {
    pending_.emplace_back(std::move(target), std::move(contents));
  }

  void commit() {
    namespace fs = std::filesystem;
    for (const auto& [target, contents] : pending_) {
      fs::path tmp = target;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
      out << contents;
      out.close();
      if (!out) throw IoError("failed writing " + tmp.string());
      staged_.push_back(tmp);
    }
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      std::error_code ec;
      fs::rename(staged_[i], pending_[i].first, ec);
      if (ec) throw IoError("cannot move " + staged_[i].string() + " into place: " + ec.message());
    }
    staged_.clear();
    pending_.clear();
  }

private:
  void discard() noexcept {
    for (const auto& p : staged_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    staged_.clear();
  }

  std::vector<std::pair<std::filesystem::path, std::string>> pending_;
  std::vector<std::filesystem::path> staged_;
};

}  // namespace qkick

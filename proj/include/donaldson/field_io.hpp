#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "donaldson/dynamics.hpp"
#include "donaldson/forms.hpp"

namespace donaldson {

/// Binary layout: "DGF4FORM", u32 version (1), u32 grid_n, u8 degree,
/// 3 zero bytes, then little-endian f64 components, one lexicographic
/// component block after another, x1 slowest / x4 fastest within a block.
inline constexpr std::size_t kFieldHeaderBytes = 20;
inline constexpr std::uint32_t kFieldFormatVersion = 1;

void dump_field(const KForm& a, std::ostream& out);
void dump_field(const KForm& a, const std::filesystem::path& path);

/// Reads a dumped field; throws std::runtime_error on a malformed file.
KForm load_field(std::istream& in);
KForm load_field(const std::filesystem::path& path);

inline constexpr const char* kFlowCsvHeader =
    "step,t,energy,grad_norm,min_u,speed,solver_iters,max_residual";

/// One header line and one row per record; speed is empty when absent.
void write_flow_csv(std::span<const FlowRecord> records, std::ostream& out);

}  // namespace donaldson

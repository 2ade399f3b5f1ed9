#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qcs/resonance.hpp"

namespace qcs {

// Fixed-width significant-digit rendering ("%.12g"): the same value always
// prints the same bytes, which is what makes CSV reruns comparable.
std::string format_sig(double v);

// Header "d,x,sum,normalized,r_weight"; records without a resonator weight
// leave the last field empty.
std::string scan_records_csv(std::span<const ScanRecord> records);

// Write-then-rename so readers never observe a half-written file.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace qcs

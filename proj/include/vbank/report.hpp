#pragma once

#include "vbank/sweep.hpp"

#include <filesystem>
#include <string>

namespace vbank {

enum class ReportKind {
    Fig3,  // bank multiple vs rate per (portfolio, MOC), reference line at 1.0
    Fig4,  // underwriter gross return vs rate per portfolio, reference line at 0
};

/// Writes a self-contained SVG chart to `out` and its backing CSV next to it
/// (same stem, `.csv`). Throws DomainError on an empty table, IoError when the
/// files cannot be written; nothing is created in either case.
void emit_report(const SweepTable& t, ReportKind kind, const std::filesystem::path& out);

/// SVG text for `kind`, without touching the filesystem.
std::string render_svg(const SweepTable& t, ReportKind kind);
std::string render_backing_csv(const SweepTable& t, ReportKind kind);

}  // namespace vbank

#pragma once

#include <optional>
#include <string>

#include "litcmp/table.hpp"

namespace litcmp {

// Text shown for a cell in flat exports: values joined by "; ", or "-" when
// the cell is empty.
std::string cell_text(const Cell& cell);

// RFC 4180 CSV (CRLF line ends) of the visible rows. Header row is
// "Property" followed by one column per contribution titled by paper title;
// a transposed table puts contributions on the rows instead.
std::string render_csv(const ComparisonTable& table);

struct LatexExport {
    std::string latex;
    std::string bibtex;
};

// booktabs tabular plus a BibTeX file for the compared papers. When a
// permalink is given it is printed as the table footnote.
LatexExport render_latex(const ComparisonTable& table, const std::optional<std::string>& permalink = std::nullopt);

std::string latex_escape(std::string_view text);
std::string bibtex_key(const PaperMetadata& paper);

}  // namespace litcmp

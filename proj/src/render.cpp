#include "litcmp/render.hpp"

#include <map>
#include <set>
#include <sstream>

namespace litcmp {

namespace {

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void csv_row(std::ostringstream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_field(fields[i]);
    }
    out << "\r\n";
}

// Rows of display strings including the header, honoring transposition.
std::vector<std::vector<std::string>> grid(const ComparisonTable& table,
                                           const std::vector<std::string>& column_titles) {
    const auto rows = table.visible_groups();
    std::vector<std::vector<std::string>> out;
    if (!table.config.transposed) {
        std::vector<std::string> header{"Property"};
        header.insert(header.end(), column_titles.begin(), column_titles.end());
        out.push_back(std::move(header));
        for (auto g : rows) {
            std::vector<std::string> line{table.groups[g].label};
            for (std::size_t c = 0; c < table.contributions.size(); ++c) line.push_back(cell_text(table.cell(g, c)));
            out.push_back(std::move(line));
        }
    } else {
        std::vector<std::string> header{"Paper"};
        for (auto g : rows) header.push_back(table.groups[g].label);
        out.push_back(std::move(header));
        for (std::size_t c = 0; c < table.contributions.size(); ++c) {
            std::vector<std::string> line{column_titles[c]};
            for (auto g : rows) line.push_back(cell_text(table.cell(g, c)));
            out.push_back(std::move(line));
        }
    }
    return out;
}

std::string slug(std::string_view text) {
    std::string out;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (c >= 'A' && c <= 'Z') out += static_cast<char>(c - 'A' + 'a');
        else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out += ch;
    }
    return out;
}

std::string family_name(const std::string& author) {
    // "Family, Given" or "Given Family"
    if (auto comma = author.find(','); comma != std::string::npos) return author.substr(0, comma);
    auto last = author.find_last_of(' ');
    return last == std::string::npos ? author : author.substr(last + 1);
}

}  // namespace

std::string cell_text(const Cell& cell) {
    if (cell.values.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < cell.values.size(); ++i) {
        if (i) out += "; ";
        out += cell.values[i].display;
    }
    return out;
}

std::string render_csv(const ComparisonTable& table) {
    std::vector<std::string> titles;
    for (const auto& c : table.contributions) titles.push_back(c.title());
    std::ostringstream out;
    for (const auto& row : grid(table, titles)) csv_row(out, row);
    return out.str();
}

std::string latex_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\textbackslash{}"; break;
            case '&': out += "\\&"; break;
            case '%': out += "\\%"; break;
            case '$': out += "\\$"; break;
            case '#': out += "\\#"; break;
            case '_': out += "\\_"; break;
            case '{': out += "\\{"; break;
            case '}': out += "\\}"; break;
            case '~': out += "\\textasciitilde{}"; break;
            case '^': out += "\\textasciicircum{}"; break;
            case '\n': out += ' '; break;
            default: out += c;
        }
    }
    return out;
}

std::string bibtex_key(const PaperMetadata& paper) {
    std::string key = paper.authors.empty() ? "anonymous" : slug(family_name(paper.authors.front()));
    if (key.empty()) key = "anonymous";
    key += paper.year ? std::to_string(*paper.year) : "nd";
    return key;
}

LatexExport render_latex(const ComparisonTable& table, const std::optional<std::string>& permalink) {
    LatexExport result;

    // One BibTeX entry per distinct paper; colliding keys get a letter suffix.
    std::map<std::string, std::string> key_of_paper;
    std::map<std::string, int> key_uses;
    std::ostringstream bib;
    for (const auto& col : table.contributions) {
        if (!col.paper || key_of_paper.contains(col.paper->id.value)) continue;
        const auto& meta = col.paper->metadata;
        std::string key = bibtex_key(meta);
        if (int n = key_uses[key]++; n > 0) key += static_cast<char>('a' + n);
        key_of_paper[col.paper->id.value] = key;

        bib << "@article{" << key << ",\n";
        bib << "  title = {{" << latex_escape(meta.title) << "}},\n";
        if (!meta.authors.empty()) {
            bib << "  author = {";
            for (std::size_t i = 0; i < meta.authors.size(); ++i) {
                if (i) bib << " and ";
                bib << latex_escape(meta.authors[i]);
            }
            bib << "},\n";
        }
        if (meta.year) bib << "  year = {" << *meta.year << "},\n";
        if (meta.doi) bib << "  doi = {" << latex_escape(*meta.doi) << "},\n";
        bib << "}\n\n";
    }
    result.bibtex = bib.str();

    std::vector<std::string> titles;
    for (const auto& col : table.contributions) {
        std::string title = latex_escape(col.title());
        if (col.paper) title += "~\\cite{" + key_of_paper.at(col.paper->id.value) + "}";
        titles.push_back(std::move(title));
    }
    auto rows = grid(table, titles);

    std::ostringstream tex;
    tex << "% requires \\usepackage{booktabs} and \\usepackage{url}\n";
    tex << "\\begin{table}[ht]\n\\centering\n";
    tex << "\\begin{tabular}{" << std::string(rows.front().size(), 'l') << "}\n";
    tex << "\\toprule\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (c) tex << " & ";
            // Titles in the header (or first column when transposed) are already escaped.
            bool pre_escaped = table.config.transposed ? (c == 0 && r > 0) : (r == 0 && c > 0);
            tex << (pre_escaped ? rows[r][c] : latex_escape(rows[r][c]));
        }
        tex << " \\\\\n";
        if (r == 0) tex << "\\midrule\n";
    }
    tex << "\\bottomrule\n\\end{tabular}\n";
    if (permalink) tex << "\\par\\footnotesize{Persistent link: \\url{" << *permalink << "}}\n";
    tex << "\\end{table}\n";
    result.latex = tex.str();
    return result;
}

}  // namespace litcmp

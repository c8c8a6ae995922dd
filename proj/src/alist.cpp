#include "keysim/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "keysim/errors.hpp"

namespace keysim {

namespace {

// Line-oriented tokenizer that remembers where it is for error messages.
class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    int line_number() const { return line_; }

    // Next non-empty line split into non-negative integers.
    std::vector<long> next_ints(const char* section) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            std::istringstream ls(line);
            std::vector<long> vals;
            long v;
            while (ls >> v) {
                if (v < 0)
                    throw parse_error(std::string("negative value in ") + section, line_);
                vals.push_back(v);
            }
            std::string trailing;
            if (ls.clear(), ls >> trailing)
                throw parse_error(std::string("non-numeric token '") + trailing + "' in " + section,
                                  line_);
            if (!vals.empty())
                return vals;
        }
        throw parse_error(std::string("unexpected end of file while reading ") + section, line_);
    }

private:
    std::istringstream in_;
    int line_ = 0;
};

} // namespace

SparseParityMatrix load_alist(const std::string& text) {
    LineReader reader(text);

    auto header = reader.next_ints("header");
    if (header.size() != 2)
        throw parse_error("header must be 'n m'", reader.line_number());
    const long n = header[0], m = header[1];
    if (n <= 0 || m <= 0)
        throw parse_error("header dimensions must be positive", reader.line_number());

    auto max_weights = reader.next_ints("max weights");
    if (max_weights.size() != 2)
        throw parse_error("expected 'max_col_weight max_row_weight'", reader.line_number());
    const long wc_max = max_weights[0], wr_max = max_weights[1];

    // Weight lists may be wrapped across lines by some writers; gather until
    // the expected count is reached.
    auto read_weights = [&](long count, long max_weight, const char* section) {
        std::vector<long> weights;
        while (static_cast<long>(weights.size()) < count) {
            auto vals = reader.next_ints(section);
            for (long v : vals) {
                if (v < 1 || v > max_weight)
                    throw parse_error(std::string("weight out of range in ") + section,
                                      reader.line_number());
                weights.push_back(v);
            }
        }
        if (static_cast<long>(weights.size()) != count)
            throw parse_error(std::string("too many entries in ") + section, reader.line_number());
        return weights;
    };

    auto col_weights = read_weights(n, wc_max, "column weights");
    auto row_weights = read_weights(m, wr_max, "row weights");

    // One line per column: the 1-based check indices, optionally zero padded.
    std::vector<std::vector<std::uint32_t>> col_lists(n);
    for (long j = 0; j < n; ++j) {
        auto vals = reader.next_ints("column index lists");
        std::vector<std::uint32_t> idx;
        for (long v : vals) {
            if (v == 0)
                continue; // padding
            if (v > m)
                throw parse_error("check index " + std::to_string(v) + " out of range (m = " +
                                      std::to_string(m) + ")",
                                  reader.line_number());
            idx.push_back(static_cast<std::uint32_t>(v - 1));
        }
        if (static_cast<long>(idx.size()) != col_weights[j])
            throw parse_error("column " + std::to_string(j + 1) + " lists " +
                                  std::to_string(idx.size()) + " checks but declares weight " +
                                  std::to_string(col_weights[j]),
                              reader.line_number());
        col_lists[j] = std::move(idx);
    }

    std::vector<std::vector<std::uint32_t>> rows(m);
    for (long i = 0; i < m; ++i) {
        auto vals = reader.next_ints("row index lists");
        std::vector<std::uint32_t> idx;
        for (long v : vals) {
            if (v == 0)
                continue;
            if (v > n)
                throw parse_error("variable index " + std::to_string(v) + " out of range (n = " +
                                      std::to_string(n) + ")",
                                  reader.line_number());
            idx.push_back(static_cast<std::uint32_t>(v - 1));
        }
        if (static_cast<long>(idx.size()) != row_weights[i])
            throw parse_error("row " + std::to_string(i + 1) + " lists " +
                                  std::to_string(idx.size()) + " variables but declares weight " +
                                  std::to_string(row_weights[i]),
                              reader.line_number());
        rows[i] = std::move(idx);
    }

    SparseParityMatrix H;
    try {
        H = SparseParityMatrix::from_rows(static_cast<std::size_t>(n), std::move(rows));
    } catch (const input_error& e) {
        throw parse_error(e.what(), reader.line_number());
    }

    // Cross-check the column section against the row section.
    for (long j = 0; j < n; ++j) {
        auto sorted = col_lists[j];
        std::sort(sorted.begin(), sorted.end());
        if (sorted != H.cols[j])
            throw parse_error("column " + std::to_string(j + 1) +
                                  " disagrees with the row index lists",
                              reader.line_number());
    }
    return H;
}

SparseParityMatrix load_alist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_alist(buf.str());
}

std::string emit_alist(const SparseParityMatrix& H) {
    std::size_t wc_max = 0, wr_max = 0;
    for (const auto& col : H.cols) {
        if (col.empty())
            throw input_error("emit_alist: zero-weight column cannot be represented");
        wc_max = std::max(wc_max, col.size());
    }
    for (const auto& row : H.rows) {
        if (row.empty())
            throw input_error("emit_alist: zero-weight row cannot be represented");
        wr_max = std::max(wr_max, row.size());
    }

    std::ostringstream out;
    out << H.n << ' ' << H.m << '\n';
    out << wc_max << ' ' << wr_max << '\n';
    for (std::size_t j = 0; j < H.n; ++j)
        out << H.cols[j].size() << (j + 1 < H.n ? ' ' : '\n');
    for (std::size_t i = 0; i < H.m; ++i)
        out << H.rows[i].size() << (i + 1 < H.m ? ' ' : '\n');
    for (const auto& col : H.cols) {
        for (std::size_t t = 0; t < col.size(); ++t)
            out << col[t] + 1 << (t + 1 < col.size() ? ' ' : '\n');
    }
    for (const auto& row : H.rows) {
        for (std::size_t t = 0; t < row.size(); ++t)
            out << row[t] + 1 << (t + 1 < row.size() ? ' ' : '\n');
    }
    return out.str();
}

void emit_alist_file(const SparseParityMatrix& H, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open '" + path + "' for writing");
    out << emit_alist(H);
    if (!out)
        throw io_error("write to '" + path + "' failed");
}

} // namespace keysim

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "imgtn/ht_network.hpp"
#include "imgtn/number_format.hpp"
#include "imgtn/tensor_train.hpp"

namespace imgtn {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw error("cannot format number");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw precondition_error("bad number '" + std::string(text) + "'");
    return value;
}

BinaryImage pad_image(const BinaryImage& x, int new_side) {
    if (new_side < x.side()) throw precondition_error("cannot pad to a smaller side");
    BinaryImage y(new_side);
    for (int r = 1; r <= x.side(); ++r)
        for (int c = 1; c <= x.side(); ++c) y.set(r, c, x.at(r, c));
    return y;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    std::istringstream next(const char* what) {
        std::string line;
        while (std::getline(is_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.front() == '#') continue;
            return std::istringstream(line);
        }
        throw parse_error(lineno_, std::string("unexpected end of file, expected ") + what);
    }

    void expect_keyword(std::istringstream& ss, const std::string& keyword) {
        std::string word;
        if (!(ss >> word) || word != keyword) throw fail("expected '" + keyword + "'");
    }

    template <class T>
    T read(std::istringstream& ss, const char* what) {
        std::string token;
        if (!(ss >> token)) throw fail(std::string("missing ") + what);
        if constexpr (std::is_same_v<T, double>) {
            try {
                return parse_double(token);
            } catch (const precondition_error& e) {
                throw fail(e.what());
            }
        } else {
            T value{};
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw fail(std::string("bad ") + what + " '" + token + "'");
            return value;
        }
    }

    void expect_end(std::istringstream& ss) {
        std::string extra;
        if (ss >> extra) throw fail("unexpected trailing token '" + extra + "'");
    }

    parse_error fail(const std::string& what) const { return parse_error(lineno_, what); }

private:
    std::istream& is_;
    std::size_t lineno_ = 0;
};

void write_row(std::ostream& os, const auto& row) {
    for (Eigen::Index c = 0; c < row.size(); ++c) {
        if (c) os << ' ';
        os << format_double(row(c));
    }
}

} // namespace

void write_tt(std::ostream& os, const TensorTrain<double>& tt) {
    os << "imgtn-tt 1\n";
    os << "n " << tt.side() << '\n';
    os << "bonds";
    for (auto l : tt.bond_dims()) os << ' ' << l;
    os << '\n';
    for (int k = 1; k <= tt.length(); ++k)
        for (int b = 0; b < 2; ++b) {
            os << "core " << k << ' ' << b << '\n';
            const auto& m = tt.core(k)[b];
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                write_row(os, m.row(r));
                os << '\n';
            }
        }
}

TensorTrain<double> read_tt(std::istream& is) {
    LineReader in(is);
    auto header = in.next("header");
    in.expect_keyword(header, "imgtn-tt");
    if (in.read<int>(header, "version") != 1) throw in.fail("unsupported tensor-train version");
    auto nline = in.next("n");
    in.expect_keyword(nline, "n");
    const int n = in.read<int>(nline, "n");
    if (n <= 0) throw in.fail("n must be positive");
    auto bline = in.next("bonds");
    in.expect_keyword(bline, "bonds");
    std::vector<Eigen::Index> bonds;
    for (int k = 0; k <= n * n; ++k) bonds.push_back(in.read<Eigen::Index>(bline, "bond dimension"));
    in.expect_end(bline);
    std::vector<TensorTrain<double>::Core> cores(static_cast<std::size_t>(n) * n);
    for (int k = 1; k <= n * n; ++k)
        for (int b = 0; b < 2; ++b) {
            auto cl = in.next("core header");
            in.expect_keyword(cl, "core");
            if (in.read<int>(cl, "core index") != k || in.read<int>(cl, "bit") != b)
                throw in.fail("cores out of order");
            auto& m = cores[static_cast<std::size_t>(k - 1)][b];
            m.resize(bonds[static_cast<std::size_t>(k - 1)], bonds[static_cast<std::size_t>(k)]);
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                auto row = in.next("matrix row");
                for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = in.read<double>(row, "value");
                in.expect_end(row);
            }
        }
    try {
        return TensorTrain<double>(n, std::move(cores));
    } catch (const precondition_error& e) {
        throw in.fail(e.what());
    }
}

void write_ht(std::ostream& os, const HTNetwork<double>& net) {
    os << "imgtn-ht 1\n";
    os << "n " << net.side() << '\n';
    os << "form " << (net.form() == HTForm::generalized ? "generalized" : "diagonal") << '\n';
    os << "channels";
    for (auto l : net.channel_counts()) os << ' ' << l;
    os << '\n';
    const auto& tree = net.tree();
    for (int i = 2; i <= tree.layers(); ++i)
        for (const auto& t : tree.layer(i)) {
            const auto& w = net.weights(t);
            for (Eigen::Index m = 0; m < w.rows(); ++m) {
                os << t.layer << ' ' << t.j << ' ' << t.k << ' ' << m << ' ';
                write_row(os, w.row(m));
                os << '\n';
            }
        }
}

HTNetwork<double> read_ht(std::istream& is) {
    LineReader in(is);
    auto header = in.next("header");
    in.expect_keyword(header, "imgtn-ht");
    if (in.read<int>(header, "version") != 1) throw in.fail("unsupported network version");
    auto nline = in.next("n");
    in.expect_keyword(nline, "n");
    const int n = in.read<int>(nline, "n");
    auto fline = in.next("form");
    in.expect_keyword(fline, "form");
    std::string form_name;
    fline >> form_name;
    if (form_name != "generalized" && form_name != "diagonal") throw in.fail("unknown form '" + form_name + "'");
    const auto form = form_name == "generalized" ? HTForm::generalized : HTForm::diagonal;
    auto cline = in.next("channels");
    in.expect_keyword(cline, "channels");
    std::vector<Eigen::Index> channels;
    for (Eigen::Index l; cline >> l;) channels.push_back(l);
    std::optional<HTNetwork<double>> net;
    try {
        net.emplace(n, form, channels);
    } catch (const precondition_error& e) {
        throw in.fail(e.what());
    }
    const auto& tree = net->tree();
    for (int i = 2; i <= tree.layers(); ++i)
        for (const auto& t : tree.layer(i)) {
            auto& w = net->weights(t);
            for (Eigen::Index m = 0; m < w.rows(); ++m) {
                auto line = in.next("weight row");
                if (in.read<int>(line, "layer") != t.layer || in.read<int>(line, "j") != t.j ||
                    in.read<int>(line, "k") != t.k || in.read<Eigen::Index>(line, "channel") != m)
                    throw in.fail("weight rows out of order");
                for (Eigen::Index c = 0; c < w.cols(); ++c) w(m, c) = in.read<double>(line, "value");
                in.expect_end(line);
            }
        }
    return std::move(*net);
}

} // namespace imgtn

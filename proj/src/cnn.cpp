#include "floodwatch/cnn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace floodwatch {

void CnnConfig::validate() const {
    if (conv_width == 0 || filters == 0 || pool_window == 0 || hidden == 0) {
        throw ConfigError("CNN sizes must be positive");
    }
    if (seq_len < conv_width) {
        throw ConfigError("sequence length must be at least the convolution width");
    }
}

std::size_t CnnParams::size() const {
    std::size_t n = 0;
    for (const auto* t : tensors()) {
        n += t->size();
    }
    return n;
}

bool CnnParams::all_finite() const {
    for (const auto* t : tensors()) {
        for (double v : *t) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
    }
    return true;
}

CnnModel::CnnModel(CnnConfig cfg, std::shared_ptr<const EmbeddingSpace> embeddings, std::uint64_t seed)
    : cfg_(cfg), embeddings_(std::move(embeddings)) {
    cfg_.validate();
    if (!embeddings_ || embeddings_->dim() == 0) {
        throw ConfigError("CNN needs a non-empty embedding space");
    }
    const std::size_t d = embeddings_->dim();
    const std::size_t window = cfg_.conv_width * d;
    std::mt19937_64 rng(seed);
    auto fill = [&rng](std::vector<double>& w, std::size_t n, double limit) {
        std::uniform_real_distribution<double> u(-limit, limit);
        w.resize(n);
        for (auto& v : w) {
            v = u(rng);
        }
    };
    fill(params_.conv_w, cfg_.filters * window, std::sqrt(6.0 / static_cast<double>(window + cfg_.filters)));
    params_.conv_b.assign(cfg_.filters, 0.0);
    fill(params_.dense_w, cfg_.hidden * cfg_.filters, std::sqrt(6.0 / static_cast<double>(cfg_.filters)));
    params_.dense_b.assign(cfg_.hidden, 0.0);
    fill(params_.out_w, 2 * cfg_.hidden, std::sqrt(6.0 / static_cast<double>(cfg_.hidden + 2)));
    params_.out_b.assign(2, 0.0);
}

void CnnModel::set_embeddings(std::shared_ptr<const EmbeddingSpace> space) {
    if (!space || space->dim() != dim()) {
        throw ConfigError("replacement embedding space has a different dimension");
    }
    embeddings_ = std::move(space);
}

SequenceMatrix CnnModel::encode(const EncodedText& input) const {
    return embeddings_->embed(input.tokens, input.language, cfg_.seq_len);
}

void CnnModel::check_shape(const SequenceMatrix& x) const {
    if (x.rows != cfg_.seq_len || x.cols != dim() || x.values.size() != x.rows * x.cols || x.valid_length > x.rows) {
        throw Error("input matrix is " + std::to_string(x.rows) + "x" + std::to_string(x.cols) + ", model expects " +
                    std::to_string(cfg_.seq_len) + "x" + std::to_string(dim()));
    }
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

ProbPair softmax2(const std::array<double, 2>& z) {
    const double m = std::max(z[0], z[1]);
    const double e0 = std::exp(z[0] - m);
    const double e1 = std::exp(z[1] - m);
    const double s = e0 + e1;
    return {e0 / s, e1 / s};
}

double log_softmax(const std::array<double, 2>& z, int k) {
    const double m = std::max(z[0], z[1]);
    return z[static_cast<std::size_t>(k)] - m - std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
}

}  // namespace

ForwardTrace CnnModel::forward_trace(const SequenceMatrix& x) const {
    check_shape(x);
    const std::size_t d = dim();
    const std::size_t width = cfg_.conv_width * d;
    const std::size_t positions = cfg_.positions();
    const std::size_t windows = cfg_.windows();
    const std::size_t valid = x.valid_length;
    ForwardTrace t;
    t.conv_pre.resize(cfg_.filters * positions);
    t.window_max.resize(cfg_.filters * windows);
    t.pooled.resize(cfg_.filters);
    t.argmax.resize(cfg_.filters);

    for (std::size_t f = 0; f < cfg_.filters; ++f) {
        const double* w = params_.conv_w.data() + f * width;
        const double b = params_.conv_b[f];
        double* pre = t.conv_pre.data() + f * positions;
        for (std::size_t p = 0; p < positions; ++p) {
            // Rows at or past valid_length are zero padding.
            const std::size_t live_rows = p < valid ? std::min(cfg_.conv_width, valid - p) : 0;
            pre[p] = b + dot(w, x.values.data() + p * d, live_rows * d);
        }
        double best = -1.0;
        std::size_t best_pos = 0;
        for (std::size_t win = 0; win < windows; ++win) {
            const std::size_t lo = win * cfg_.pool_window;
            const std::size_t hi = std::min(lo + cfg_.pool_window, positions);
            double wmax = -1.0;
            std::size_t wpos = lo;
            for (std::size_t p = lo; p < hi; ++p) {
                const double a = std::max(pre[p], 0.0);
                if (a > wmax) {
                    wmax = a;
                    wpos = p;
                }
            }
            t.window_max[f * windows + win] = wmax;
            if (wmax > best) {
                best = wmax;
                best_pos = wpos;
            }
        }
        t.pooled[f] = best;
        t.argmax[f] = best_pos;
    }

    t.hidden_pre.resize(cfg_.hidden);
    t.hidden.resize(cfg_.hidden);
    for (std::size_t h = 0; h < cfg_.hidden; ++h) {
        t.hidden_pre[h] = params_.dense_b[h] + dot(params_.dense_w.data() + h * cfg_.filters, t.pooled.data(), cfg_.filters);
        t.hidden[h] = std::max(t.hidden_pre[h], 0.0);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        t.logits[k] = params_.out_b[k] + dot(params_.out_w.data() + k * cfg_.hidden, t.hidden.data(), cfg_.hidden);
    }
    t.probs = softmax2(t.logits);
    return t;
}

ProbPair CnnModel::forward(const SequenceMatrix& x) const {
    return forward_trace(x).probs;
}

double CnnModel::loss(std::span<const EncodedText> batch, std::span<const int> labels) const {
    if (batch.size() != labels.size() || batch.empty()) {
        throw Error("loss needs a non-empty batch with one label per item");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        total -= log_softmax(forward_trace(encode(batch[i])).logits, labels[i]);
    }
    return total / static_cast<double>(batch.size());
}

Gradients zero_gradients(const CnnModel& model) {
    Gradients g;
    const auto& p = model.params();
    g.params.conv_w.assign(p.conv_w.size(), 0.0);
    g.params.conv_b.assign(p.conv_b.size(), 0.0);
    g.params.dense_w.assign(p.dense_w.size(), 0.0);
    g.params.dense_b.assign(p.dense_b.size(), 0.0);
    g.params.out_w.assign(p.out_w.size(), 0.0);
    g.params.out_b.assign(p.out_b.size(), 0.0);
    return g;
}

double CnnModel::backprop(const SequenceMatrix& x, const EncodedText& input, int label, double scale,
                          Gradients& g) const {
    const ForwardTrace t = forward_trace(x);
    const std::size_t d = dim();
    const std::size_t width = cfg_.conv_width * d;

    std::array<double, 2> dz{t.probs.negative, t.probs.positive};
    dz[static_cast<std::size_t>(label)] -= 1.0;
    dz[0] *= scale;
    dz[1] *= scale;

    std::vector<double> dh(cfg_.hidden, 0.0);
    for (std::size_t k = 0; k < 2; ++k) {
        g.params.out_b[k] += dz[k];
        double* gw = g.params.out_w.data() + k * cfg_.hidden;
        const double* w = params_.out_w.data() + k * cfg_.hidden;
        for (std::size_t h = 0; h < cfg_.hidden; ++h) {
            gw[h] += dz[k] * t.hidden[h];
            dh[h] += w[h] * dz[k];
        }
    }

    std::vector<double> dpooled(cfg_.filters, 0.0);
    for (std::size_t h = 0; h < cfg_.hidden; ++h) {
        if (t.hidden_pre[h] <= 0.0) {
            continue;
        }
        g.params.dense_b[h] += dh[h];
        double* gw = g.params.dense_w.data() + h * cfg_.filters;
        const double* w = params_.dense_w.data() + h * cfg_.filters;
        for (std::size_t f = 0; f < cfg_.filters; ++f) {
            gw[f] += dh[h] * t.pooled[f];
            dpooled[f] += w[f] * dh[h];
        }
    }

    const std::size_t positions = cfg_.positions();
    const bool tune = !cfg_.frozen_embeddings;
    std::vector<double> dx;
    if (tune) {
        dx.assign(x.valid_length * d, 0.0);
    }
    for (std::size_t f = 0; f < cfg_.filters; ++f) {
        const std::size_t p = t.argmax[f];
        if (t.conv_pre[f * positions + p] <= 0.0 || dpooled[f] == 0.0) {
            continue;
        }
        const double dpre = dpooled[f];
        g.params.conv_b[f] += dpre;
        const std::size_t live_rows = p < x.valid_length ? std::min(cfg_.conv_width, x.valid_length - p) : 0;
        double* gw = g.params.conv_w.data() + f * width;
        const double* w = params_.conv_w.data() + f * width;
        const double* xs = x.values.data() + p * d;
        for (std::size_t i = 0; i < live_rows * d; ++i) {
            gw[i] += dpre * xs[i];
        }
        if (tune) {
            for (std::size_t i = 0; i < live_rows * d; ++i) {
                dx[p * d + i] += dpre * w[i];
            }
        }
    }

    if (tune) {
        const auto& table = embeddings_->table_for(input.language);
        const std::string lang_key = embeddings_->mode() == EmbeddingMode::agnostic ? std::string{} : input.language;
        for (std::size_t r = 0; r < x.valid_length; ++r) {
            const std::string& tok = input.tokens[r];
            if (table.find(tok) == nullptr) {
                continue;  // OOV rows are constant zero
            }
            auto& acc = g.embeddings[{lang_key, tok}];
            acc.resize(d, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                acc[j] += dx[r * d + j];
            }
        }
    }
    return -log_softmax(t.logits, label);
}

Gradients CnnModel::gradients(std::span<const EncodedText> batch, std::span<const int> labels, double* loss_out) const {
    if (batch.size() != labels.size() || batch.empty()) {
        throw Error("gradients need a non-empty batch with one label per item");
    }
    Gradients g = zero_gradients(*this);
    const double scale = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw Error("labels must be 0 or 1");
        }
        total += backprop(encode(batch[i]), batch[i], labels[i], scale, g);
    }
    if (loss_out != nullptr) {
        *loss_out = total * scale;
    }
    return g;
}

// Serialization ------------------------------------------------------------

namespace {

constexpr const char* kMagic = "floodwatch-cnn";
constexpr int kFormatVersion = 1;

void write_values(std::ostream& out, const std::vector<double>& v) {
    char buf[32];
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto r = std::to_chars(buf, buf + sizeof buf, v[i]);
        out.write(buf, r.ptr - buf);
        out.put(i + 1 == v.size() ? '\n' : ' ');
    }
    if (v.empty()) {
        out.put('\n');
    }
}

std::string expect_word(std::istream& in, const char* what) {
    std::string w;
    if (!(in >> w)) {
        throw ConfigError(std::string("model file truncated before ") + what);
    }
    return w;
}

template <class T>
T read_number(std::istream& in, const char* what) {
    std::string w = expect_word(in, what);
    T v{};
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) {
        throw ConfigError(std::string("bad value for ") + what + " in model file: " + w);
    }
    return v;
}

void expect_key(std::istream& in, const std::string& key) {
    std::string w = expect_word(in, key.c_str());
    if (w != key) {
        throw ConfigError("model file: expected '" + key + "', found '" + w + "'");
    }
}

}  // namespace

void CnnModel::save(std::ostream& out) const {
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "seq_len " << cfg_.seq_len << '\n';
    out << "conv_width " << cfg_.conv_width << '\n';
    out << "filters " << cfg_.filters << '\n';
    out << "pool_window " << cfg_.pool_window << '\n';
    out << "hidden " << cfg_.hidden << '\n';
    out << "embedding_dim " << dim() << '\n';
    out << "embedding_mode " << (embeddings_->mode() == EmbeddingMode::agnostic ? "agnostic" : "aligned") << '\n';
    out << "frozen " << (cfg_.frozen_embeddings ? 1 : 0) << '\n';
    const auto tensors = params_.tensors();
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        out << "tensor " << CnnParams::kNames[i] << ' ' << tensors[i]->size() << '\n';
        write_values(out, *tensors[i]);
    }
    if (!cfg_.frozen_embeddings) {
        for (const auto& lang : embeddings_->languages()) {
            const auto& table = embeddings_->table_for(lang);
            out << "embeddings " << (lang.empty() ? "-" : lang) << ' ' << table.size() << '\n';
            out << serialize_embeddings(table);
        }
    }
    out << "end\n";
}

void CnnModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write model " + path.string());
    }
    save(out);
}

CnnModel CnnModel::load(std::istream& in, std::shared_ptr<const EmbeddingSpace> embeddings) {
    if (expect_word(in, "header") != kMagic) {
        throw ConfigError("not a floodwatch model file");
    }
    if (read_number<int>(in, "version") != kFormatVersion) {
        throw ConfigError("unsupported model format version");
    }
    CnnModel m;
    expect_key(in, "seq_len");
    m.cfg_.seq_len = read_number<std::size_t>(in, "seq_len");
    expect_key(in, "conv_width");
    m.cfg_.conv_width = read_number<std::size_t>(in, "conv_width");
    expect_key(in, "filters");
    m.cfg_.filters = read_number<std::size_t>(in, "filters");
    expect_key(in, "pool_window");
    m.cfg_.pool_window = read_number<std::size_t>(in, "pool_window");
    expect_key(in, "hidden");
    m.cfg_.hidden = read_number<std::size_t>(in, "hidden");
    expect_key(in, "embedding_dim");
    const auto d = read_number<std::size_t>(in, "embedding_dim");
    expect_key(in, "embedding_mode");
    const std::string mode = expect_word(in, "embedding_mode");
    expect_key(in, "frozen");
    m.cfg_.frozen_embeddings = read_number<int>(in, "frozen") != 0;
    m.cfg_.validate();

    auto tensors = m.params_.tensors();
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        expect_key(in, "tensor");
        expect_key(in, CnnParams::kNames[i]);
        const auto n = read_number<std::size_t>(in, "tensor size");
        tensors[i]->resize(n);
        for (auto& v : *tensors[i]) {
            v = read_number<double>(in, CnnParams::kNames[i]);
        }
    }
    const std::size_t width = m.cfg_.conv_width * d;
    if (m.params_.conv_w.size() != m.cfg_.filters * width || m.params_.conv_b.size() != m.cfg_.filters ||
        m.params_.dense_w.size() != m.cfg_.hidden * m.cfg_.filters || m.params_.dense_b.size() != m.cfg_.hidden ||
        m.params_.out_w.size() != 2 * m.cfg_.hidden || m.params_.out_b.size() != 2) {
        throw ConfigError("model tensor sizes do not match the stored architecture");
    }

    if (!m.cfg_.frozen_embeddings) {
        std::map<std::string, EmbeddingTable> tables;
        std::string word;
        while (in >> word && word == "embeddings") {
            std::string lang = expect_word(in, "embedding language");
            const auto count = read_number<std::size_t>(in, "embedding count");
            std::string line;
            std::getline(in, line);
            std::string block;
            for (std::size_t i = 0; i < count && std::getline(in, line); ++i) {
                block += line;
                block += '\n';
            }
            const auto emode = mode == "agnostic" ? EmbeddingMode::agnostic : EmbeddingMode::aligned;
            tables.emplace(lang == "-" ? std::string{} : lang, parse_embeddings(block, emode, lang == "-" ? "" : lang).table);
        }
        if (word != "end") {
            throw ConfigError("model file missing end marker");
        }
        if (mode == "agnostic") {
            m.embeddings_ = std::make_shared<EmbeddingSpace>(EmbeddingSpace::agnostic(std::move(tables.at(""))));
        } else {
            m.embeddings_ = std::make_shared<EmbeddingSpace>(EmbeddingSpace::aligned(std::move(tables)));
        }
    } else {
        expect_key(in, "end");
        if (!embeddings) {
            throw ConfigError("frozen model needs an embedding space to load");
        }
        m.embeddings_ = std::move(embeddings);
    }
    if (m.embeddings_->dim() != d) {
        throw ConfigError("model expects " + std::to_string(d) + "-dimensional embeddings, got " +
                          std::to_string(m.embeddings_->dim()));
    }
    const bool want_agnostic = mode == "agnostic";
    if (want_agnostic != (m.embeddings_->mode() == EmbeddingMode::agnostic)) {
        throw ConfigError("model was trained with " + mode + " embeddings");
    }
    return m;
}

CnnModel CnnModel::load(const std::filesystem::path& path, std::shared_ptr<const EmbeddingSpace> embeddings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open model " + path.string());
    }
    return load(in, std::move(embeddings));
}

}  // namespace floodwatch

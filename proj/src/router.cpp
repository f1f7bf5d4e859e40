#include "floodwatch/router.hpp"

#include "floodwatch/kernels.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <iostream>

namespace floodwatch {

QueryMatcher::QueryMatcher(const StreamQuery& query) : query_(&query) {
    for (std::size_t i = 0; i < query.keywords.size(); ++i) {
        keywords_.add(query.keywords[i].text, i);
    }
}

std::vector<std::string> QueryMatcher::match(const Message& msg) const {
    return match(msg, text::tokenize(msg.text));
}

std::vector<std::string> QueryMatcher::match(const Message& msg, const std::vector<std::string>& tokens) const {
    std::vector<std::string> ids;
    if (msg.coords) {
        for (const auto& b : query_->boxes) {
            if (b.box.contains(*msg.coords)) {
                ids.insert(ids.end(), b.owners.begin(), b.owners.end());
            }
        }
    }
    for (const auto& hit : keywords_.find_all(tokens)) {
        const auto& owners = query_->keywords[hit.phrase].owners;
        ids.insert(ids.end(), owners.begin(), owners.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<std::string> match_events(const Message& msg, const StreamQuery& query) {
    return QueryMatcher(query).match(msg);
}

namespace {

std::atomic<bool> g_source_open{false};

int connect_tcp(const std::string& endpoint) {
    auto colon = endpoint.rfind(':');
    if (colon == std::string::npos) {
        throw ConfigError("tcp source must be tcp://host:port");
    }
    std::string host = endpoint.substr(0, colon);
    std::string port = endpoint.substr(colon + 1);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
        throw StageError("cannot resolve " + endpoint);
    }
    int fd = -1;
    for (addrinfo* p = res; p != nullptr; p = p->ai_next) {
        fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
        if (fd < 0) {
            continue;
        }
        if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) {
            break;
        }
        ::close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0) {
        throw StageError("cannot connect to " + endpoint);
    }
    return fd;
}

}  // namespace

ReplaySource::ReplaySource(const std::string& location) {
    bool expected = false;
    if (!g_source_open.compare_exchange_strong(expected, true)) {
        throw StageError("a replay source is already open (single-connection contract)");
    }
    try {
        if (location == "-") {
            use_stdin_ = true;
        } else if (location.starts_with("tcp://")) {
            socket_ = connect_tcp(location.substr(6));
        } else {
            file_.open(location, std::ios::binary);
            if (!file_) {
                throw StageError("cannot read message source " + location);
            }
        }
    } catch (...) {
        g_source_open = false;
        throw;
    }
}

ReplaySource::~ReplaySource() {
    if (socket_ >= 0) {
        ::close(socket_);
    }
    g_source_open = false;
}

bool ReplaySource::read_line(std::string& line) {
    if (socket_ < 0) {
        std::istream& in = use_stdin_ ? std::cin : static_cast<std::istream&>(file_);
        if (!std::getline(in, line)) {
            return false;
        }
        if (in.bad()) {
            throw StageError("read error on message source");
        }
        return true;
    }
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return true;
        }
        if (eof_) {
            if (buffer_.empty()) {
                return false;
            }
            line = std::move(buffer_);
            buffer_.clear();
            return true;
        }
        char chunk[65536];
        ssize_t n = ::recv(socket_, chunk, sizeof chunk, 0);
        if (n < 0) {
            throw StageError("socket read error");
        }
        if (n == 0) {
            eof_ = true;
        } else {
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }
}

std::optional<Message> ReplaySource::next() {
    std::string line;
    while (read_line(line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        ++lines_;
        try {
            return parse_message_line(line);
        } catch (const Error&) {
            ++skipped_;
        }
    }
    return std::nullopt;
}

EventFileSink::EventFileSink(std::filesystem::path state_dir) : root_(std::move(state_dir)) {}

void EventFileSink::append(const std::string& event_id, const Message& msg) {
    auto it = files_.find(event_id);
    if (it == files_.end()) {
        auto dir = root_ / "events" / event_id;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        std::ofstream out(dir / "raw.ndjson", std::ios::app | std::ios::binary);
        if (!out) {
            throw StageError("cannot open sink for event " + event_id);
        }
        it = files_.emplace(event_id, std::move(out)).first;
    }
    it->second << to_json(msg).dump() << '\n';
    if (!it->second) {
        throw StageError("write failed for event " + event_id);
    }
}

void EventFileSink::flush() {
    for (auto& [id, f] : files_) {
        f.flush();
        if (!f) {
            throw StageError("flush failed for event " + id);
        }
    }
}

RoutingReport& RoutingReport::operator+=(const RoutingReport& other) {
    input += other.input;
    routed += other.routed;
    dropped += other.dropped;
    appends += other.appends;
    for (const auto& [id, n] : other.per_event) {
        per_event[id] += n;
    }
    return *this;
}

RoutingReport route(std::span<const Message> messages, const StreamQuery& query, MessageSink& sink,
                    Execution exec) {
    QueryMatcher matcher(query);
    auto assignments = exec == Execution::parallel ? kernels::match_batch_parallel(matcher, messages)
                                                   : kernels::match_batch_serial(matcher, messages);
    RoutingReport report;
    for (std::size_t i = 0; i < messages.size(); ++i) {
        if (assignments[i].empty()) {
            ++report.input;
            ++report.dropped;
            continue;
        }
        for (const auto& id : assignments[i]) {
            try {
                sink.append(id, messages[i]);
            } catch (const std::exception& e) {
                throw RoutingError(std::string("sink failure: ") + e.what(), report);
            }
            ++report.appends;
            ++report.per_event[id];
        }
        ++report.input;
        ++report.routed;
    }
    return report;
}

RoutingReport route(ReplaySource& source, const StreamQuery& query, MessageSink& sink, Execution exec,
                    std::size_t batch_size) {
    RoutingReport total;
    std::vector<Message> batch;
    batch.reserve(batch_size);
    auto drain = [&] {
        try {
            total += route(batch, query, sink, exec);
        } catch (const RoutingError& e) {
            RoutingReport partial = total;
            partial += e.partial();
            throw RoutingError(e.what(), partial);
        }
        batch.clear();
    };
    while (auto msg = source.next()) {
        batch.push_back(std::move(*msg));
        if (batch.size() == batch_size) {
            drain();
        }
    }
    if (!batch.empty()) {
        drain();
    }
    try {
        sink.flush();
    } catch (const std::exception& e) {
        throw RoutingError(std::string("sink failure: ") + e.what(), total);
    }
    return total;
}

}  // namespace floodwatch

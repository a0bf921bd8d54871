#include "lagnet/panel.hpp"

#include "lagnet/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace lagnet {

std::string SeriesLabel::str() const {
    if (lag == 0) {
        return name;
    }
    return name + "_lag" + std::to_string(lag);
}

SeriesLabel SeriesLabel::parse(std::string_view text) {
    const auto pos = text.rfind("_lag");
    if (pos != std::string_view::npos && pos > 0 && pos + 4 < text.size()) {
        const std::string_view digits = text.substr(pos + 4);
        const bool all_digits = std::all_of(digits.begin(), digits.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        });
        if (all_digits) {
            int lag = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), lag);
            if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
                return SeriesLabel{std::string(text.substr(0, pos)), lag};
            }
        }
    }
    return SeriesLabel{std::string(text), 0};
}

namespace {

void check_dates_increasing(const std::vector<Date>& dates) {
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(dates[t - 1] < dates[t])) {
            throw ValidationError("dates not strictly increasing at " + format_date(dates[t]));
        }
    }
}

template <typename LabelSeq, typename ToString>
void check_labels_unique(const LabelSeq& labels, ToString&& to_string) {
    std::set<std::string> seen;
    for (const auto& label : labels) {
        const std::string s = to_string(label);
        if (s.empty()) {
            throw ValidationError("empty series label");
        }
        if (!seen.insert(s).second) {
            throw ValidationError("duplicate series label '" + s + "'");
        }
    }
}

} // namespace

PricePanel::PricePanel(std::vector<Date> dates, std::vector<std::string> labels,
                       Eigen::MatrixXd prices, BoolMatrix missing)
    : dates_(std::move(dates)), labels_(std::move(labels)), prices_(std::move(prices)),
      missing_(std::move(missing)) {
    if (labels_.empty()) {
        throw ValidationError("price panel needs at least one series");
    }
    if (prices_.rows() != static_cast<Eigen::Index>(dates_.size()) ||
        prices_.cols() != static_cast<Eigen::Index>(labels_.size()) ||
        missing_.rows() != prices_.rows() || missing_.cols() != prices_.cols()) {
        throw ValidationError("price panel dimensions do not match dates/labels");
    }
    check_dates_increasing(dates_);
    check_labels_unique(labels_, [](const std::string& s) { return s; });
    for (Eigen::Index t = 0; t < prices_.rows(); ++t) {
        for (Eigen::Index i = 0; i < prices_.cols(); ++i) {
            if (missing_(t, i)) {
                continue;
            }
            if (!std::isfinite(prices_(t, i)) || prices_(t, i) <= 0.0) {
                throw ValidationError("non-positive price at (" + format_date(dates_[t]) + ", " +
                                      labels_[i] + ")");
            }
        }
    }
}

ReturnPanel::ReturnPanel(std::vector<Date> dates, std::vector<SeriesLabel> labels,
                         Eigen::MatrixXd returns, Frequency frequency)
    : dates_(std::move(dates)), labels_(std::move(labels)), returns_(std::move(returns)),
      frequency_(frequency) {
    if (labels_.empty()) {
        throw ValidationError("return panel needs at least one series");
    }
    if (returns_.rows() != static_cast<Eigen::Index>(dates_.size()) ||
        returns_.cols() != static_cast<Eigen::Index>(labels_.size())) {
        throw ValidationError("return panel dimensions do not match dates/labels");
    }
    check_dates_increasing(dates_);
    check_labels_unique(labels_, [](const SeriesLabel& l) { return l.str(); });
    if (!returns_.allFinite()) {
        throw ValidationError("return panel contains non-finite entries");
    }
}

Eigen::Index ReturnPanel::column_of(const SeriesLabel& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            return static_cast<Eigen::Index>(i);
        }
    }
    throw ValidationError("no series labeled '" + label.str() + "'");
}

PricePanel load_price_table(const std::vector<PriceRow>& rows) {
    if (rows.empty()) {
        throw ValidationError("empty price table");
    }
    std::set<Date> date_set;
    std::set<std::string> label_set;
    for (const auto& row : rows) {
        if (!std::isfinite(row.price) || row.price <= 0.0) {
            throw ValidationError("non-positive price at (" + format_date(row.date) + ", " +
                                  row.label + ")");
        }
        date_set.insert(row.date);
        label_set.insert(row.label);
    }
    const std::vector<Date> dates(date_set.begin(), date_set.end());
    const std::vector<std::string> labels(label_set.begin(), label_set.end());
    std::map<Date, Eigen::Index> date_index;
    std::map<std::string, Eigen::Index> label_index;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        date_index[dates[t]] = static_cast<Eigen::Index>(t);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        label_index[labels[i]] = static_cast<Eigen::Index>(i);
    }

    Eigen::MatrixXd prices = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dates.size()),
                                                   static_cast<Eigen::Index>(labels.size()));
    BoolMatrix missing = BoolMatrix::Constant(prices.rows(), prices.cols(), true);
    for (const auto& row : rows) {
        const Eigen::Index t = date_index[row.date];
        const Eigen::Index i = label_index[row.label];
        if (!missing(t, i) && prices(t, i) != row.price) {
            throw ValidationError("conflicting duplicate observation at (" + format_date(row.date) +
                                  ", " + row.label + ")");
        }
        prices(t, i) = row.price;
        missing(t, i) = false;
    }
    return PricePanel(dates, labels, std::move(prices), std::move(missing));
}

PricePanel align_calendars(const PricePanel& panel, const CalendarPolicy& policy) {
    const Eigen::Index n_rows = panel.rows();
    const Eigen::Index n_cols = panel.cols();
    for (Eigen::Index i = 0; i < n_cols; ++i) {
        bool any = false;
        for (Eigen::Index t = 0; t < n_rows && !any; ++t) {
            any = !panel.missing()(t, i);
        }
        if (!any) {
            throw ValidationError("series '" + panel.labels()[i] + "' has zero observations");
        }
    }

    Eigen::MatrixXd prices = panel.prices();
    BoolMatrix missing = panel.missing();
    if (policy.mode != AlignMode::intersection) {
        // Both union modes repeat the last observed price, bounded by the
        // fill cap; a repeated price is exactly a zero log-return.
        for (Eigen::Index i = 0; i < n_cols; ++i) {
            double last = 0.0;
            bool have_last = false;
            int run = 0;
            for (Eigen::Index t = 0; t < n_rows; ++t) {
                if (!missing(t, i)) {
                    last = prices(t, i);
                    have_last = true;
                    run = 0;
                    continue;
                }
                ++run;
                if (have_last && run <= policy.max_consecutive_fill) {
                    prices(t, i) = last;
                    missing(t, i) = false;
                }
            }
        }
    }

    std::vector<Date> kept_dates;
    std::vector<Eigen::Index> kept_rows;
    for (Eigen::Index t = 0; t < n_rows; ++t) {
        bool complete = true;
        for (Eigen::Index i = 0; i < n_cols && complete; ++i) {
            complete = !missing(t, i);
        }
        if (complete) {
            kept_dates.push_back(panel.dates()[t]);
            kept_rows.push_back(t);
        }
    }

    Eigen::MatrixXd out(static_cast<Eigen::Index>(kept_rows.size()), n_cols);
    for (std::size_t r = 0; r < kept_rows.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = prices.row(kept_rows[r]);
    }
    return PricePanel(std::move(kept_dates), panel.labels(), std::move(out),
                      BoolMatrix::Constant(static_cast<Eigen::Index>(kept_rows.size()), n_cols, false));
}

ReturnPanel log_returns(const PricePanel& panel) {
    if (panel.any_missing()) {
        throw ValidationError("log returns require an aligned panel with no missing entries");
    }
    if (panel.rows() < 2) {
        throw ValidationError("log returns require at least 2 dates");
    }
    const Eigen::Index n_out = panel.rows() - 1;
    Eigen::MatrixXd returns(n_out, panel.cols());
    for (Eigen::Index t = 0; t < n_out; ++t) {
        returns.row(t) =
            panel.prices().row(t + 1).array().log() - panel.prices().row(t).array().log();
    }
    std::vector<Date> dates(panel.dates().begin() + 1, panel.dates().end());
    std::vector<SeriesLabel> labels;
    labels.reserve(panel.labels().size());
    for (const auto& name : panel.labels()) {
        labels.push_back(SeriesLabel{name, 0});
    }
    return ReturnPanel(std::move(dates), std::move(labels), std::move(returns), Frequency::daily);
}

ReturnPanel weekly_average(const ReturnPanel& panel) {
    if (panel.frequency() == Frequency::weekly) {
        throw ValidationError("panel is already weekly");
    }
    std::vector<Date> week_dates;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> week_spans; // [first, last] row range
    IsoWeek current{};
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        const IsoWeek wk = iso_week(panel.dates()[t]);
        if (week_spans.empty() || wk != current) {
            current = wk;
            week_dates.push_back(iso_week_start(panel.dates()[t]));
            week_spans.emplace_back(t, t);
        } else {
            week_spans.back().second = t;
        }
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(week_spans.size()), panel.cols());
    for (std::size_t w = 0; w < week_spans.size(); ++w) {
        const auto [first, last] = week_spans[w];
        out.row(static_cast<Eigen::Index>(w)) =
            panel.returns().middleRows(first, last - first + 1).colwise().mean();
    }
    return ReturnPanel(std::move(week_dates), panel.labels(), std::move(out), Frequency::weekly);
}

ReturnPanel drop_constant_columns(const ReturnPanel& panel, std::vector<std::string>* dropped) {
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < panel.cols(); ++i) {
        const auto col = panel.returns().col(i);
        if (col.minCoeff() == col.maxCoeff()) {
            if (dropped != nullptr) {
                dropped->push_back(panel.labels()[i].str());
            }
        } else {
            kept.push_back(i);
        }
    }
    if (kept.size() == static_cast<std::size_t>(panel.cols())) {
        return panel;
    }
    Eigen::MatrixXd out(panel.rows(), static_cast<Eigen::Index>(kept.size()));
    std::vector<SeriesLabel> labels;
    labels.reserve(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = panel.returns().col(kept[k]);
        labels.push_back(panel.labels()[kept[k]]);
    }
    return ReturnPanel(panel.dates(), std::move(labels), std::move(out), panel.frequency());
}

} // namespace lagnet

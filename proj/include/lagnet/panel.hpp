#pragma once

#include "lagnet/dates.hpp"

#include <Eigen/Dense>

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace lagnet {

enum class Frequency { daily, weekly };

/// Series identifier: base name plus a lag tag in days (0 = untagged).
/// String form is "NAME" for lag 0 and "NAME_lag<k>" otherwise.
struct SeriesLabel {
    std::string name;
    int lag = 0;

    std::string str() const;

    /// Inverse of str(): a trailing "_lag<digits>" becomes the lag tag.
    static SeriesLabel parse(std::string_view text);

    friend bool operator==(const SeriesLabel&, const SeriesLabel&) = default;
    auto operator<=>(const SeriesLabel&) const = default;
};

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Daily closing prices, |dates| x |labels|. Immutable after construction.
/// Entries are meaningful only where the missing mask is false; present
/// entries are strictly positive.
class PricePanel {
public:
    PricePanel(std::vector<Date> dates, std::vector<std::string> labels, Eigen::MatrixXd prices,
               BoolMatrix missing);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::MatrixXd& prices() const { return prices_; }
    const BoolMatrix& missing() const { return missing_; }

    Eigen::Index rows() const { return prices_.rows(); }
    Eigen::Index cols() const { return prices_.cols(); }
    bool any_missing() const { return missing_.any(); }

private:
    std::vector<Date> dates_;
    std::vector<std::string> labels_;
    Eigen::MatrixXd prices_;
    BoolMatrix missing_;
};

/// Log-return panel, |dates| x |labels|. Immutable after construction;
/// every entry finite, labels unique including lag tags.
class ReturnPanel {
public:
    ReturnPanel(std::vector<Date> dates, std::vector<SeriesLabel> labels, Eigen::MatrixXd returns,
                Frequency frequency);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<SeriesLabel>& labels() const { return labels_; }
    const Eigen::MatrixXd& returns() const { return returns_; }
    Frequency frequency() const { return frequency_; }

    Eigen::Index rows() const { return returns_.rows(); }
    Eigen::Index cols() const { return returns_.cols(); }

    /// Column index of `label`; throws ValidationError if absent.
    Eigen::Index column_of(const SeriesLabel& label) const;

private:
    std::vector<Date> dates_;
    std::vector<SeriesLabel> labels_;
    Eigen::MatrixXd returns_;
    Frequency frequency_;
};

enum class AlignMode { intersection, union_fill_forward, union_zero_return };

struct CalendarPolicy {
    AlignMode mode = AlignMode::union_fill_forward;
    int max_consecutive_fill = 5; // longest run of carried-forward observations
};

struct PriceRow {
    Date date;
    std::string label;
    double price = 0.0;
};

/// Assembles a panel from long-format observations. Dates are sorted and
/// deduplicated, labels sorted lexicographically; absent (date,label) pairs
/// are marked missing. Duplicate observations must agree on the price.
PricePanel load_price_table(const std::vector<PriceRow>& rows);

/// Reconciles trading calendars. Intersection keeps dates seen by every
/// series; the union modes carry the last observed price forward through
/// runs of at most max_consecutive_fill gaps (a repeated price is a zero
/// log-return, so both union modes coincide on prices). Rows still holding
/// gaps afterwards are dropped; the result has no missing entries.
PricePanel align_calendars(const PricePanel& panel, const CalendarPolicy& policy);

/// r[t][i] = ln p[t+1][i] - ln p[t][i]; rows carry the later date.
/// Requires an aligned panel (no missing entries) with at least 2 dates.
ReturnPanel log_returns(const PricePanel& panel);

/// Arithmetic mean of each ISO week's daily rows; the output row carries the
/// week's Monday. Weeks with no trading days simply do not appear.
ReturnPanel weekly_average(const ReturnPanel& panel);

/// Copy of the panel without constant columns. Dropped label strings are
/// appended to *dropped when given.
ReturnPanel drop_constant_columns(const ReturnPanel& panel, std::vector<std::string>* dropped = nullptr);

} // namespace lagnet

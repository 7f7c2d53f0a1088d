//! Running integral of the sawtooth age process.

/// Area under the age curve, accumulated reset by reset.
///
/// Between resets the age grows with slope one; each reset is a downward
/// jump to the delivered packet's age. Only one simulation run writes to an
/// accumulator.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeAccumulator {
    first_reset_time: f64,
    last_reset_time: f64,
    current_age_at_reset: f64,
    integral: f64,
    resets: u64,
}

impl AgeAccumulator {
    /// Starts integrating at the first reset.
    pub fn new(reset_time: f64, age: f64) -> Self {
        Self {
            first_reset_time: reset_time,
            last_reset_time: reset_time,
            current_age_at_reset: age,
            integral: 0.0,
            resets: 1,
        }
    }

    /// Area of one inter-reset segment starting at `age` and lasting `duration`.
    pub fn segment_area(age: f64, duration: f64) -> f64 {
        (age + (age + duration)) / 2.0 * duration
    }

    /// Closes the current segment at `time` and jumps to `age`. Returns the
    /// closed segment's area.
    pub fn reset(&mut self, time: f64, age: f64) -> f64 {
        assert!(
            time >= self.last_reset_time,
            "age resets must be time-ordered ({time} < {})",
            self.last_reset_time
        );
        let area = Self::segment_area(self.current_age_at_reset, time - self.last_reset_time);
        self.integral += area;
        self.last_reset_time = time;
        self.current_age_at_reset = age;
        self.resets += 1;
        area
    }

    /// Age at `time`, assuming no reset since the last one.
    pub fn age_at(&self, time: f64) -> f64 {
        self.current_age_at_reset + (time - self.last_reset_time)
    }

    pub fn last_reset_time(&self) -> f64 {
        self.last_reset_time
    }
    pub fn current_age_at_reset(&self) -> f64 {
        self.current_age_at_reset
    }
    pub fn integral(&self) -> f64 {
        self.integral
    }
    pub fn resets(&self) -> u64 {
        self.resets
    }

    /// Length of the integrated window.
    pub fn elapsed(&self) -> f64 {
        self.last_reset_time - self.first_reset_time
    }

    /// Time-averaged age over the integrated window, `None` before any
    /// segment has been closed.
    pub fn average(&self) -> Option<f64> {
        let span = self.elapsed();
        (span > 0.0).then(|| self.integral / span)
    }
}

use std::collections::VecDeque;

use crate::error::DefenseError;

/// Sliding averages of the aggregate per-slot traffic.
///
/// `history` keeps the most recent per-slot totals, newest last; the short
/// and long windows are suffixes of it.
#[derive(Debug, Clone)]
pub struct WindowState {
    w_s: usize,
    w_l: usize,
    retain: usize,
    history: VecDeque<u64>,
    short_sum: u64,
    long_sum: u64,
}

impl WindowState {
    /// `retain` is clamped so both windows always fit.
    pub fn new(w_s: usize, w_l: usize, retain: usize) -> Self {
        assert!(w_s > 0 && w_l > 0, "window lengths must be positive");
        let retain = retain.max(w_s).max(w_l);
        WindowState {
            w_s,
            w_l,
            retain,
            history: VecDeque::with_capacity(retain + 1),
            short_sum: 0,
            long_sum: 0,
        }
    }

    pub fn w_s(&self) -> usize {
        self.w_s
    }

    pub fn w_l(&self) -> usize {
        self.w_l
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    /// Pushes one slot total and returns `(lambda_short, lambda_long)`.
    pub fn push(&mut self, total: u64) -> (Option<f64>, Option<f64>) {
        let n = self.history.len();
        if n >= self.w_s {
            self.short_sum -= self.history[n - self.w_s];
        }
        if n >= self.w_l {
            self.long_sum -= self.history[n - self.w_l];
        }
        self.history.push_back(total);
        self.short_sum += total;
        self.long_sum += total;
        if self.history.len() > self.retain {
            self.history.pop_front();
        }
        (self.lambda_short(), self.lambda_long())
    }

    /// Mean of the last `w_s` totals, once that many slots have been seen.
    pub fn lambda_short(&self) -> Option<f64> {
        (self.history.len() >= self.w_s).then(|| self.short_sum as f64 / self.w_s as f64)
    }

    /// Mean of the last `w_l` totals, once that many slots have been seen.
    pub fn lambda_long(&self) -> Option<f64> {
        (self.history.len() >= self.w_l).then(|| self.long_sum as f64 / self.w_l as f64)
    }

    /// `len` consecutive totals ending `lag` slots before the newest one.
    pub fn slice_at_lag(&self, lag: usize, len: usize) -> Result<Vec<f64>, DefenseError> {
        let needed = lag + len;
        if len == 0 || self.history.len() < needed {
            return Err(DefenseError::InsufficientHistory {
                lag,
                needed,
                have: self.history.len(),
            });
        }
        let end = self.history.len() - lag;
        Ok(self.history.range(end - len..end).map(|&x| x as f64).collect())
    }

    /// The long-window average as it stood `lag` slots ago.
    pub fn lambda_long_at_lag(&self, lag: usize) -> Result<f64, DefenseError> {
        let s = self.slice_at_lag(lag, self.w_l)?;
        Ok(s.iter().sum::<f64>() / s.len() as f64)
    }

    /// The most recent `w_s` totals.
    pub fn short_window(&self) -> Option<Vec<f64>> {
        self.slice_at_lag(0, self.w_s).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_traffic() {
        let mut w = WindowState::new(3, 5, 20);
        for _ in 0..5 {
            w.push(7);
        }
        assert_eq!(w.lambda_short(), Some(7.0));
        assert_eq!(w.lambda_long(), Some(7.0));
        assert_eq!(w.lambda_long_at_lag(0).unwrap(), 7.0);
    }

    #[test]
    fn short_window_mean() {
        let mut w = WindowState::new(2, 4, 10);
        assert_eq!(w.push(0), (None, None));
        let (short, long) = w.push(10);
        assert_eq!(short, Some(5.0));
        assert_eq!(long, None);
    }

    #[test]
    fn lag_reaches_pre_step_window() {
        let mut w = WindowState::new(2, 5, 30);
        for _ in 0..10 {
            w.push(10);
        }
        for _ in 0..6 {
            w.push(100);
        }
        assert_eq!(w.lambda_long().unwrap(), 100.0);
        assert_eq!(w.lambda_long_at_lag(6).unwrap(), 10.0);
        assert!(w.lambda_long_at_lag(3).unwrap() > 10.0);
        assert!(matches!(
            w.lambda_long_at_lag(12),
            Err(DefenseError::InsufficientHistory { .. })
        ));
    }

    #[test]
    fn retention_is_bounded() {
        let mut w = WindowState::new(2, 3, 4);
        for i in 0..100 {
            w.push(i);
        }
        assert_eq!(w.len(), 4);
        assert_eq!(w.lambda_long(), Some(98.0));
        assert_eq!(w.lambda_short(), Some(98.5));
    }
}

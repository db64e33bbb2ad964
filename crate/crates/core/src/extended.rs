use std::fmt;
use std::iter::Sum;
use std::ops::Add;

/// A value that is either finite or the distinguished `Infinite`, which
/// orders above every finite value. Addition saturates at `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extended<U> {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl<T> From<T> for Extended<T> {
    fn from(value: T) -> Self {
        Extended::Finite(value)
    }
}

impl<T: Add<Output = T>> Add for Extended<T> {
    type Output = Extended<T>;

    fn add(self, rhs: Self) -> Self::Output {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl<T: Add<Output = T> + num_traits::Zero> Sum for Extended<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Extended::Finite(T::zero()), |acc, x| acc + x)
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

use crate::scalar::{Real, C};

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Compensated<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Compensated accumulator over complex values.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedC<T> {
    re: Compensated<T>,
    im: Compensated<T>,
}

impl<T: Real> CompensatedC<T> {
    pub fn new() -> Self {
        Self {
            re: Compensated::new(),
            im: Compensated::new(),
        }
    }

    pub fn add(&mut self, z: C<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> C<T> {
        C::new(self.re.value(), self.im.value())
    }
}

pub fn sum_compensated<T: Real, I: IntoIterator<Item = T>>(it: I) -> T {
    let mut acc = Compensated::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

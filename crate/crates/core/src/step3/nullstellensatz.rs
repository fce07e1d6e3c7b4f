//! A 0/1 vector `z` of length `r ≥ 2` with `Σ_{j≠i} z_j ≠ n_i` for every `i`.
//!
//! Such a vector always exists: the product `∏_i (Σ_{j≠i} Z_j − n_i)` has
//! degree `r` and its monomial `Z_1⋯Z_r` has a positive coefficient, so it
//! cannot vanish on all of `{0,1}^r`. The search below is constructive:
//! fix the total `s = Σ z_j`; then `Σ_{j≠i} z_j = s − z_i`, and each
//! constraint either forces `z_i` or is void.

use super::Step3Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullstellensatzInstance {
    n: Vec<u32>,
}

impl NullstellensatzInstance {
    pub fn new(n: Vec<u32>) -> Result<Self, Step3Error> {
        if n.len() < 2 {
            return Err(Step3Error::InstanceTooSmall(n.len()));
        }
        Ok(NullstellensatzInstance { n })
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    pub fn forbidden(&self) -> &[u32] {
        &self.n
    }

    pub fn is_solution(&self, z: &[bool]) -> bool {
        let total = z.iter().filter(|&&b| b).count() as i64;
        z.len() == self.n.len()
            && self
                .n
                .iter()
                .zip(z)
                .all(|(&n, &zi)| total - zi as i64 != n as i64)
    }
}

pub fn nullstellensatz_assign(inst: &NullstellensatzInstance) -> Result<Vec<bool>, Step3Error> {
    let r = inst.r();
    for s in 0..=r as i64 {
        let mut forced: Vec<Option<bool>> = vec![None; r];
        for (i, &n) in inst.n.iter().enumerate() {
            match s - n as i64 {
                0 => forced[i] = Some(true),
                1 => forced[i] = Some(false),
                _ => {}
            }
        }
        let ones = forced.iter().filter(|f| **f == Some(true)).count() as i64;
        let zeros = forced.iter().filter(|f| **f == Some(false)).count() as i64;
        if ones > s || s > r as i64 - zeros {
            continue;
        }
        let mut spare = s - ones;
        let z: Vec<bool> = forced
            .iter()
            .map(|f| match f {
                Some(b) => *b,
                None if spare > 0 => {
                    spare -= 1;
                    true
                }
                None => false,
            })
            .collect();
        debug_assert!(inst.is_solution(&z));
        return Ok(z);
    }
    Err(Step3Error::NullstellensatzExhausted(inst.n.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(z: &[bool]) -> Vec<u8> {
        z.iter().map(|&b| b as u8).collect()
    }

    fn all_solutions(inst: &NullstellensatzInstance) -> Vec<Vec<bool>> {
        let r = inst.r();
        (0u32..1 << r)
            .map(|mask| (0..r).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|z| {
                let total: u32 = z.iter().map(|&b| b as u32).sum();
                z.iter()
                    .zip(inst.forbidden())
                    .all(|(&zi, &n)| total - zi as u32 != n)
            })
            .collect()
    }

    #[test]
    fn examples() {
        let inst = NullstellensatzInstance::new(vec![0, 0]).unwrap();
        assert_eq!(all_solutions(&inst), vec![vec![true, true]]);
        assert_eq!(bits(&nullstellensatz_assign(&inst).unwrap()), vec![1, 1]);

        let inst = NullstellensatzInstance::new(vec![0, 0, 0]).unwrap();
        assert_eq!(bits(&nullstellensatz_assign(&inst).unwrap()), vec![1, 1, 0]);

        let inst = NullstellensatzInstance::new(vec![1, 0]).unwrap();
        assert_eq!(bits(&nullstellensatz_assign(&inst).unwrap()), vec![1, 0]);
    }

    #[test]
    fn rejects_short_instances() {
        assert_eq!(
            NullstellensatzInstance::new(vec![3]),
            Err(Step3Error::InstanceTooSmall(1))
        );
        assert!(NullstellensatzInstance::new(vec![]).is_err());
    }

    #[test]
    fn large_forbidden_values_are_harmless() {
        let inst = NullstellensatzInstance::new(vec![40, 41, 40]).unwrap();
        assert_eq!(bits(&nullstellensatz_assign(&inst).unwrap()), vec![0, 0, 0]);
    }
}

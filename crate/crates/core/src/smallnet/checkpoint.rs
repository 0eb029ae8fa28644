//! Self-describing binary checkpoints: magic, layer dims, then the flat
//! parameter vector as little-endian f64.

use super::mlp::Mlp;
use crate::error::{CoreError, Result};
use ndarray::{Array1, Array2};

const MAGIC: &[u8; 8] = b"SNMLP01\0";

impl Mlp {
    pub fn save_checkpoint(&self) -> Vec<u8> {
        let (dims, weights, biases) = self.raw_parts();
        let mut out = Vec::with_capacity(16 + 8 * dims.len() + 8 * self.n_params());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(dims.len() as u64).to_le_bytes());
        for d in dims {
            out.extend_from_slice(&(*d as u64).to_le_bytes());
        }
        for (w, b) in weights.iter().zip(biases) {
            for v in w.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
            for v in b.iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn load_checkpoint(bytes: &[u8]) -> Result<Mlp> {
        let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
            if *pos + n > bytes.len() {
                return Err(CoreError::format(format!(
                    "checkpoint truncated at byte {} (need {n} more)",
                    *pos
                )));
            }
            let s = &bytes[*pos..*pos + n];
            *pos += n;
            Ok(s)
        };
        let mut pos = 0usize;
        if take(&mut pos, 8)? != MAGIC {
            return Err(CoreError::format("bad checkpoint magic"));
        }
        let n_dims = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()) as usize;
        if !(2..=64).contains(&n_dims) {
            return Err(CoreError::format(format!("implausible dims count {n_dims}")));
        }
        let mut dims = Vec::with_capacity(n_dims);
        for _ in 0..n_dims {
            let d = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()) as usize;
            if d == 0 {
                return Err(CoreError::format("zero-size layer in checkpoint"));
            }
            dims.push(d);
        }
        let read_f64 = |pos: &mut usize| -> Result<f64> {
            Ok(f64::from_le_bytes(take(pos, 8)?.try_into().unwrap()))
        };
        let mut weights = Vec::with_capacity(n_dims - 1);
        let mut biases = Vec::with_capacity(n_dims - 1);
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let mut mat = Array2::zeros((fan_in, fan_out));
            for v in mat.iter_mut() {
                *v = read_f64(&mut pos)?;
            }
            let mut b = Array1::zeros(fan_out);
            for v in b.iter_mut() {
                *v = read_f64(&mut pos)?;
            }
            weights.push(mat);
            biases.push(b);
        }
        if pos != bytes.len() {
            return Err(CoreError::format(format!(
                "checkpoint has {} trailing bytes",
                bytes.len() - pos
            )));
        }
        let net = Mlp::from_raw(dims, weights, biases);
        if net.params().iter().any(|v| !v.is_finite()) {
            return Err(CoreError::format("checkpoint holds non-finite parameters"));
        }
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bitwise_identical() {
        let net = Mlp::init(&[4, 12, 12, 3], 99).unwrap();
        let bytes = net.save_checkpoint();
        let back = Mlp::load_checkpoint(&bytes).unwrap();
        assert_eq!(net.params(), back.params());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = Array2::from_shape_fn((7, 4), |_| rng.gen_range(-2.0..2.0));
        let a = net.forward(x.view()).unwrap();
        let b = back.forward(x.view()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn file_size_is_header_plus_parameters() {
        let mut dims = vec![24];
        dims.extend(std::iter::repeat(300).take(8));
        dims.push(3);
        let net = Mlp::init(&dims, 0).unwrap();
        let bytes = net.save_checkpoint();
        let header = 8 + 8 + 8 * dims.len();
        assert_eq!(net.n_params(), 640_503);
        assert_eq!(bytes.len(), header + 8 * 640_503);
    }

    #[test]
    fn truncation_and_corruption_are_format_errors() {
        let net = Mlp::init(&[3, 5, 2], 4).unwrap();
        let bytes = net.save_checkpoint();
        assert!(matches!(
            Mlp::load_checkpoint(&bytes[..bytes.len() - 3]).unwrap_err(),
            CoreError::Format(_)
        ));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Mlp::load_checkpoint(&bad).unwrap_err(), CoreError::Format(_)));
        let mut extra = bytes;
        extra.push(0);
        assert!(matches!(Mlp::load_checkpoint(&extra).unwrap_err(), CoreError::Format(_)));
    }
}

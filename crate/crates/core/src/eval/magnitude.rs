use super::network::TinyNet;
use crate::error::{Error, Result};

/// Zeroes the smallest-magnitude node-unit weights so that exactly
/// `ceil((1 - q) * weights_total)` survive. Edge scalars, biases, projection and
/// classifier are untouched. Ties resolve by parameter index.
pub fn magnitude_prune(net: &TinyNet, q: f64) -> Result<TinyNet> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Param(format!("prune fraction must lie in [0, 1], got {q}")));
    }
    let total = net.weights_total();
    // 1e-9 absorbs products like (1 - 0.7) * 10 = 3.0000000000000004
    let keep = (((1.0 - q) * total as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut indices: Vec<usize> = net.dag().interior_nodes().flat_map(|x| net.unit_w(x)).collect();
    let params = net.params();
    indices.sort_by(|&a, &b| params[a].abs().total_cmp(&params[b].abs()).then(a.cmp(&b)));
    let mut pruned = net.clone();
    for &i in &indices[..total - keep.min(total)] {
        pruned.params_mut()[i] = 0.0;
    }
    Ok(pruned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{to_dag, Graph};

    fn single_unit(weights: [f64; 4]) -> TinyNet {
        let dag = to_dag(&Graph::new(1, false, vec![]).unwrap()).unwrap();
        let mut net = TinyNet::new(&dag, 2, 2, 2, 0).unwrap();
        let range = net.unit_w(0);
        net.params_mut()[range].copy_from_slice(&weights);
        net
    }

    #[test]
    fn half_prune_keeps_largest() {
        let net = single_unit([0.1, -0.2, 0.3, 0.4]);
        let pruned = magnitude_prune(&net, 0.5).unwrap();
        assert_eq!(&pruned.params()[net.unit_w(0)], &[0.0, 0.0, 0.3, 0.4]);
        assert_eq!(pruned.weights_remaining(), 2);
    }

    #[test]
    fn extremes() {
        let net = single_unit([0.1, -0.2, 0.3, 0.4]);
        assert_eq!(magnitude_prune(&net, 0.0).unwrap(), net);
        let all = magnitude_prune(&net, 1.0).unwrap();
        assert_eq!(all.weights_remaining(), 0);
        // only unit weights are touched
        let untouched: Vec<usize> = (0..net.param_count()).filter(|i| !net.unit_w(0).contains(i)).collect();
        assert!(untouched.iter().all(|&i| all.params()[i] == net.params()[i]));
        assert!(magnitude_prune(&net, 1.5).is_err());
    }

    #[test]
    fn ties_break_by_index() {
        let net = single_unit([0.5, -0.5, 0.5, 0.1]);
        let pruned = magnitude_prune(&net, 0.5).unwrap();
        assert_eq!(&pruned.params()[net.unit_w(0)], &[0.0, -0.5, 0.5, 0.0]);
    }
}

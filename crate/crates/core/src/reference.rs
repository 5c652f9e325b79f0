//! Published reference values: the λ_max column of the molecule table and
//! the l = 0 energy grid for q ∈ {1.0, 1.2, …, 2.0}, n ∈ 0..=4.

/// Deformations of the energy grid columns.
pub const GRID_Q: [f64; 6] = [1.0, 1.2, 1.4, 1.6, 1.8, 2.0];

/// Levels of the energy grid rows.
pub const GRID_N: [u32; 5] = [0, 1, 2, 3, 4];

/// λ_max per molecule at q = 1, c = 0, l = 0.
pub const PUBLISHED_LAMBDA_MAX: [(&str, u32); 6] = [
    ("H2", 8),
    ("I2", 58),
    ("LiH", 13),
    ("CO", 40),
    ("HCl", 11),
    ("NO", 38),
];

/// Energies in eV, indexed `[n][q]`.
pub type EnergyGrid = [[f64; 6]; 5];

pub const PUBLISHED_ENERGIES: [(&str, EnergyGrid); 6] = [
    (
        "H2",
        [
            [-4.14360, -4.10947, -4.07576, -4.04245, -4.00955, -3.97704],
            [-3.06975, -2.99323, -2.91939, -2.8481, -2.77925, -2.71273],
            [-2.19620, -2.10247, -2.01405, -1.93056, -1.85165, -1.777],
            [-1.49767, -1.40354, -1.31677, -1.23665, -1.16254, -1.09388],
            [
                -0.95323, -0.869493, -0.794203, -0.726344, -0.665042, -0.609544,
            ],
        ],
    ),
    (
        "I2",
        [
            [-1.52544, -1.52544, -1.52543, -1.52543, -1.52542, -1.52541],
            [-1.45084, -1.45082, -1.4508, -1.45078, -1.45077, -1.45075],
            [-1.3781, -1.37808, -1.37805, -1.37802, -1.37799, -1.37796],
            [-1.30724, -1.3072, -1.30716, -1.30712, -1.30709, -1.30705],
            [-1.23825, -1.2382, -1.23816, -1.23811, -1.23806, -1.23801],
        ],
    ),
    (
        "LiH",
        [
            [-2.32367, -2.31723, -2.31082, -2.30443, -2.29807, -2.29174],
            [-1.94502, -1.9285, -1.91217, -1.89604, -1.88011, -1.86437],
            [-1.60506, -1.58168, -1.55877, -1.53633, -1.51434, -1.49278],
            [-1.30207, -1.27456, -1.24783, -1.22185, -1.1966, -1.17205],
            [
                -1.03447, -1.00509, -0.97678, -0.949502, -0.923204, -0.897842,
            ],
        ],
    ),
    (
        "CO",
        [
            [-10.9744, -10.9701, -10.9659, -10.9616, -10.9574, -10.9531],
            [-10.4083, -10.396, -10.3838, -10.3716, -10.3594, -10.3472],
            [-9.85825, -9.8387, -9.81921, -9.79977, -9.78039, -9.76107],
            [-9.32425, -9.29807, -9.272, -9.24604, -9.22019, -9.19444],
            [-8.80616, -8.774, -8.74202, -8.7102, -8.67855, -8.64707],
        ],
    ),
    (
        "HCl",
        [
            [-4.26524, -4.25815, -4.25107, -4.24402, -4.23698, -4.22996],
            [-3.52214, -3.50395, -3.48589, -3.46796, -3.45016, -3.4325],
            [-2.85566, -2.83, -2.80465, -2.77962, -2.7549, -2.73048],
            [-2.26383, -2.23382, -2.20434, -2.17538, -2.14692, -2.11895],
            [-1.74477, -1.71307, -1.6821, -1.65183, -1.62225, -1.59334],
        ],
    ),
    (
        "NO",
        [
            [-7.79942, -7.79717, -7.79493, -7.7927, -7.79046, -7.78822],
            [-7.27225, -7.26588, -7.25953, -7.25318, -7.24684, -7.24051],
            [-6.76427, -6.75424, -6.74423, -6.73425, -6.72428, -6.71434],
            [-6.27538, -6.26213, -6.24892, -6.23575, -6.22262, -6.20953],
            [-5.80551, -5.78946, -5.77347, -5.75755, -5.74168, -5.72588],
        ],
    ),
];

pub fn published_energies(name: &str) -> Option<&'static EnergyGrid> {
    PUBLISHED_ENERGIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, grid)| grid)
}

pub fn published_lambda_max(name: &str) -> Option<u32> {
    PUBLISHED_LAMBDA_MAX
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, v)| v)
}

/// One cell of the energy grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedCell {
    pub n: u32,
    pub q: f64,
    pub energy: f64,
}

/// All 30 cells of a molecule, row-major in n.
pub fn published_cells(name: &str) -> Option<Vec<PublishedCell>> {
    let grid = published_energies(name)?;
    Some(
        GRID_N
            .iter()
            .zip(grid)
            .flat_map(|(&n, row)| {
                GRID_Q
                    .iter()
                    .zip(row)
                    .map(move |(&q, &energy)| PublishedCell { n, q, energy })
            })
            .collect(),
    )
}

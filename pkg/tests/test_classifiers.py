import numpy as np
import pytest

from conftest import blobs, xor_set
from har_ensemble.classifiers import (CLASSIFIERS, MLP, ClassifierSpec, DecisionTree, GaussianNB,
                                      KNearestNeighbors, LinearSVM, LogisticRegression, RandomForest,
                                      TrainingError, hinge_loss_grad, knn_predict, logistic_loss_grad,
                                      mlp_loss_grad, train_cart, train_gaussian_nb, train_linear_svm_ovr,
                                      train_logistic_regression, train_mlp, train_random_forest)
from har_ensemble.classifiers.base import one_hot


def central_diff(f, params, h=1e-6):
    """Numerical gradient of scalar f w.r.t. every array in ``params``."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        for i in np.ndindex(p.shape):
            old = p[i]
            p[i] = old + h
            up = f()
            p[i] = old - h
            down = f()
            p[i] = old
            g[i] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def rel_err(a, b):
    a = np.concatenate([x.ravel() for x in a])
    b = np.concatenate([x.ravel() for x in b])
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)


# --- gradient checks

def test_logreg_gradient(rng):
    X = rng.normal(size=(5, 4))
    Y = one_hot(np.array([0, 1, 2, 1, 0]), 3)
    W, b = rng.normal(size=(4, 3)), rng.normal(size=3)
    _, gW, gb = logistic_loss_grad(W, b, X, Y, 0.1)
    num = central_diff(lambda: logistic_loss_grad(W, b, X, Y, 0.1)[0], [W, b])
    assert rel_err([gW, gb], num) < 1e-5


def test_hinge_gradient_away_from_kink(rng):
    X = rng.normal(size=(5, 3))
    Ypm = 2 * one_hot(np.array([0, 1, 2, 2, 1]), 3) - 1
    W, b = rng.normal(size=(3, 3)), rng.normal(size=3)
    margins = Ypm * (X @ W + b)
    assert np.min(np.abs(margins - 1)) > 1e-3
    _, gW, gb = hinge_loss_grad(W, b, X, Ypm, 0.01)
    num = central_diff(lambda: hinge_loss_grad(W, b, X, Ypm, 0.01)[0], [W, b])
    assert rel_err([gW, gb], num) < 1e-4


def test_mlp_gradient(rng):
    X = rng.normal(size=(5, 4))
    Y = one_hot(np.array([0, 1, 2, 0, 2]), 3)
    params = [rng.normal(size=(4, 6)), rng.normal(size=6) * 0.1, rng.normal(size=(6, 3)), rng.normal(size=3)]
    pre = X @ params[0] + params[1]
    assert np.min(np.abs(pre)) > 1e-4  # keep every ReLU away from its kink
    _, grads = mlp_loss_grad(params, X, Y)
    num = central_diff(lambda: mlp_loss_grad(params, X, Y)[0], params)
    assert rel_err(grads, num) < 1e-4


# --- logistic regression

def test_logreg_separable_1d():
    X = np.array([[-1.0]] * 20 + [[1.0]] * 20)
    y = np.array(["A"] * 20 + ["B"] * 20)
    m = train_logistic_regression(X, y)
    assert np.mean(m.predict(X) == y) == 1.0


def test_logreg_zero_init_is_uniform():
    X = np.array([[-1.0], [1.0]])
    m = LogisticRegression(epochs=1).fit(X, [0, 1])
    # the first recorded loss is at the zero initialisation: ln 2
    assert m.loss_history_[0] == pytest.approx(np.log(2))
    m.coef_[:] = 0
    m.intercept_[:] = 0
    np.testing.assert_allclose(m.predict_proba(X), 0.5)


def test_logreg_loss_monotone(rng):
    X, y = blobs(rng, spread=1.5)
    h = np.array(LogisticRegression(lr=0.1, epochs=300).fit(X, y).loss_history_)
    assert np.all(np.diff(h) <= 1e-12)


def test_logreg_divergence_raises(rng):
    X, y = blobs(rng)
    with pytest.raises(TrainingError, match="lr"):
        LogisticRegression(lr=1e308, epochs=5).fit(X * 1e10, y)


def test_bad_hyperparameters():
    with pytest.raises(ValueError):
        LogisticRegression(lr=0)
    with pytest.raises(ValueError):
        LinearSVM(epochs=0)
    with pytest.raises(ValueError):
        MLP(hidden=0)
    with pytest.raises(ValueError):
        DecisionTree(max_depth=0)
    with pytest.raises(ValueError):
        RandomForest(n_trees=0)
    with pytest.raises(ValueError):
        GaussianNB(var_floor=0)


# --- naive Bayes

def test_gnb_symmetric_query():
    X = np.array([[-1.0], [-1.2], [-0.8], [1.0], [1.2], [0.8]])
    m = train_gaussian_nb(X, [0, 0, 0, 1, 1, 1])
    np.testing.assert_allclose(m.predict_proba([[0.0]]), [[0.5, 0.5]], atol=1e-12)


def test_gnb_tight_class_mean(rng):
    X = np.concatenate([rng.normal(0, 0.01, (20, 2)), rng.normal(1, 0.01, (20, 2))])
    m = train_gaussian_nb(X, [0] * 20 + [1] * 20)
    assert m.predict_proba([m.theta_[1]])[0, 1] > 0.99


def test_gnb_priors(rng):
    m = train_gaussian_nb(rng.normal(size=(8, 2)), [0] * 6 + [1] * 2)
    np.testing.assert_allclose(m.class_prior_, [0.75, 0.25])


def test_gnb_density_oracle(rng):
    X, y = blobs(rng, n_per_class=10, spread=1.0)
    m = train_gaussian_nb(X, y)
    q = rng.normal(size=2)
    from scipy.stats import norm
    joint = [np.mean(y == c) * np.prod(norm.pdf(q, X[y == c].mean(0), np.sqrt(X[y == c].var(0))))
             for c in range(3)]
    np.testing.assert_allclose(m.predict_proba([q])[0], np.array(joint) / sum(joint), rtol=1e-9)


# --- k-NN

def test_knn_nearest():
    p = knn_predict([[0.0], [10.0]], ["A", "B"], [[1.0]], k=1)
    np.testing.assert_array_equal(p, [[1.0, 0.0]])


def test_knn_all_points_uniform_gives_frequencies(rng):
    X = rng.normal(size=(8, 3))
    y = [0, 0, 0, 1, 1, 2, 2, 2]
    p = knn_predict(X, y, rng.normal(size=(4, 3)), k=8, weighted=False)
    np.testing.assert_allclose(p, np.tile([3 / 8, 2 / 8, 3 / 8], (4, 1)))


def test_knn_brute_force_sort():
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 3.0], [-1.0, -1.0]])
    y = np.array([0, 1, 1, 0, 1])
    q = np.array([0.2, 0.1])
    dists = sorted((np.sqrt(np.sum((X[i] - q) ** 2)), i) for i in range(5))[:3]
    expect = np.zeros(2)
    for d, i in dists:
        expect[y[i]] += 1 / (d + 1e-9)
    got = knn_predict(X, y, [q], k=3, weighted=True)[0]
    np.testing.assert_allclose(got, expect / expect.sum(), rtol=1e-12)


def test_knn_distance_ties_keep_training_order():
    X = np.array([[1.0], [-1.0], [1.0]])
    m = KNearestNeighbors(k=1, weighted=False).fit(X, [5, 7, 9])
    assert m.predict([[0.0]]).tolist() == [5]


def test_knn_k_too_large():
    with pytest.raises(ValueError):
        KNearestNeighbors(k=3).fit(np.zeros((2, 1)), [0, 1])


# --- linear SVM

def test_svm_separable(rng):
    X, y = blobs(rng, centers=((-2, -2), (2, 2)))
    m = train_linear_svm_ovr(X, y)
    assert np.mean(m.predict(X) == y) == 1.0
    # the true class's OvR margin is non-negative on every row
    scores = m.decision_function(X)
    assert np.all(scores[np.arange(len(y)), y] >= 0)


def test_svm_boundary_point_is_even():
    m = LinearSVM(epochs=1).fit(np.array([[-1.0], [1.0]]), [0, 1])
    m.coef_ = np.array([[-1.0, 1.0]])
    m.intercept_ = np.array([0.0, 0.0])
    np.testing.assert_allclose(m.predict_proba([[0.0]]), [[0.5, 0.5]])


# --- MLP

def test_mlp_xor(rng):
    X, y = xor_set(rng)
    m = train_mlp(X, y, hidden=8, lr=0.1, epochs=300, batch=16, seed=3)
    assert np.mean(m.predict(X) == y) >= 0.95
    assert m.loss_history_[-1] < m.loss_history_[0]


def test_mlp_zero_weights_uniform(rng):
    X, y = blobs(rng)
    m = MLP(hidden=4, epochs=1).fit(X, y)
    for p in (m.W1_, m.b1_, m.W2_, m.b2_):
        p[...] = 0
    np.testing.assert_allclose(m.predict_proba(X), 1 / 3)


def test_mlp_deterministic(rng):
    X, y = blobs(rng)
    a = MLP(hidden=5, epochs=5, seed=11).fit(X, y)
    b = MLP(hidden=5, epochs=5, seed=11).fit(X, y)
    for p, q in zip((a.W1_, a.b1_, a.W2_, a.b2_), (b.W1_, b.b1_, b.W2_, b.b2_)):
        assert p.tobytes() == q.tobytes()


def test_mlp_glorot_init_range(rng):
    m = MLP(hidden=10)
    W1, _, W2, _ = m.init_params(30, 4, np.random.default_rng(0))
    assert np.abs(W1).max() <= np.sqrt(6 / 40)
    assert np.abs(W2).max() <= np.sqrt(6 / 14)


# --- CART and forest

def test_cart_single_split():
    X = np.array([[1.0], [2.0], [8.0], [9.0]])
    m = train_cart(X, ["A", "A", "B", "B"], min_leaf=1)
    assert m.depth_ == 1
    assert 2 < m.threshold_[0] < 8
    assert m.predict(X).tolist() == ["A", "A", "B", "B"]


def test_cart_pure_is_leaf(rng):
    m = train_cart(rng.normal(size=(10, 3)), [4] * 10)
    assert len(m.feature_) == 1 and m.feature_[0] == -1
    assert m.predict(rng.normal(size=(3, 3))).tolist() == [4, 4, 4]


def test_cart_respects_depth_and_leaf(rng):
    X, y = blobs(rng, spread=3.0)
    m = train_cart(X, y, max_depth=3, min_leaf=5)
    assert m.depth_ <= 3
    counts = np.bincount(m.apply(X))
    assert counts[m.feature_ == -1].min() >= 5


def test_cart_leaf_probabilities_are_frequencies(rng):
    X, y = blobs(rng, spread=3.0)
    m = train_cart(X, y, max_depth=2, min_leaf=1)
    leaves = m.apply(X)
    for leaf in np.unique(leaves):
        freq = np.bincount(y[leaves == leaf], minlength=3) / np.sum(leaves == leaf)
        np.testing.assert_allclose(m.value_[leaf], freq)


@pytest.mark.parametrize("kind", ["logreg", "linsvm", "cart", "rforest"])
def test_separable_blobs_training_accuracy(rng, kind):
    X, y = blobs(rng)
    m = CLASSIFIERS[kind]().fit(X, y)
    assert np.mean(m.predict(X) == y) >= 0.99


def test_forest_degenerate_equals_cart(rng):
    X, y = blobs(rng, spread=2.5)
    cart = DecisionTree(max_depth=6, min_leaf=2).fit(X, y)
    forest = RandomForest(n_trees=1, max_depth=6, min_leaf=2, max_features=None, bootstrap=False).fit(X, y)
    Q = rng.normal(scale=4, size=(200, 2))
    np.testing.assert_array_equal(forest.predict(Q), cart.predict(Q))
    np.testing.assert_array_equal(forest.predict_proba(Q), cart.predict_proba(Q))


def test_forest_deterministic(rng):
    X, y = blobs(rng, spread=2.0)
    a = train_random_forest(X, y, n_trees=10, seed=5)
    b = train_random_forest(X, y, n_trees=10, seed=5)
    Q = rng.normal(scale=4, size=(100, 2))
    assert a.predict_proba(Q).tobytes() == b.predict_proba(Q).tobytes()
    c = train_random_forest(X, y, n_trees=10, seed=6)
    assert a.predict_proba(Q).tobytes() != c.predict_proba(Q).tobytes()


def test_forest_handles_missing_class_in_bootstrap(rng):
    X = rng.normal(size=(20, 3))
    y = np.array([0] * 19 + [1])
    m = RandomForest(n_trees=15, seed=1).fit(X, y)
    assert m.predict_proba(X).shape == (20, 2)


# --- shared contract

@pytest.mark.parametrize("kind", sorted(CLASSIFIERS))
def test_contract(rng, kind):
    X, y = blobs(rng, spread=2.0)
    y = y * 10 + 1  # non-contiguous codes
    params = {"epochs": 20} if kind in ("logreg", "linsvm", "mlp") else {}
    if kind == "rforest":
        params = {"n_trees": 5}
    m = ClassifierSpec(kind, params).build(seed=0).fit(X, y)
    Q = rng.normal(scale=4, size=(50, 2))
    P = m.predict_proba(Q)
    assert np.all(P >= 0)
    np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-9)
    np.testing.assert_array_equal(m.predict(Q), m.classes_[np.argmax(P, axis=1)])
    assert m.classes_.tolist() == [1, 11, 21]
    with pytest.raises(ValueError):
        m.predict_proba(np.zeros((1, 5)))


def test_unknown_kind():
    with pytest.raises(ValueError, match="unknown classifier"):
        ClassifierSpec("svm-rbf")

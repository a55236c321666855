"""Independent reference implementations used by several test modules."""


def brute_force_metrics(y_true, y_pred):
    """Accuracy and macro precision/recall/F with plain loops over samples."""
    classes = sorted(set(y_true) | set(y_pred))
    n = len(y_true)
    correct = 0
    for t, p in zip(y_true, y_pred):
        if t == p:
            correct += 1
    recalls, precisions, fscores = [], [], []
    for c in classes:
        tp = fp = fn = 0
        for t, p in zip(y_true, y_pred):
            if t == c and p == c:
                tp += 1
            elif t != c and p == c:
                fp += 1
            elif t == c and p != c:
                fn += 1
        r = tp / (tp + fn) if tp + fn else 0.0
        pr = tp / (tp + fp) if tp + fp else 0.0
        f = 2 * pr * r / (pr + r) if pr + r else 0.0
        recalls.append(r)
        precisions.append(pr)
        fscores.append(f)
    k = len(classes)
    return {
        "accuracy": correct / n,
        "recall": sum(recalls) / k,
        "precision": sum(precisions) / k,
        "fscore": sum(fscores) / k,
    }

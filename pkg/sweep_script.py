import argparse
import os

methods = ['kmeans',
           'hier-kmeans',
           'pca-tree',
           'srp',
           'wta',
           'exact']
grids = ['--top_p 1 2 3 5 8 13 20',
         '--top_p 1 2 4 8 16 32',
         '--pca_depth 1 2 3 4 5 6 7 8 9 10 11 12',
         '--tables 1 2 4 8 16 32 64 128 --bits 16',
         '--tables 1 2 4 8 16 32 64 128 --perms 8 --prefix_k 16',
         '']

assert len(methods) == len(grids)


def main(args):
    gt_cache = os.path.join(args.data_dir, f'{args.dataset}_gt.bin')
    queries = os.path.join(args.data_dir, f'{args.dataset}_queries.bin')
    for method, grid in zip(methods, grids):
        run_name = '_'.join([args.dataset, method, str(args.seed)])
        out = os.path.join('./runs', run_name, 'results.csv')
        if not os.path.exists(out):
            os.system(f"python -m src.main sweep "
                      f"--run_name {run_name} "
                      f"--data {os.path.join(args.data_dir, args.dataset + '.bin')} "
                      f"--queries {queries} "
                      f"--gt_cache {gt_cache} "
                      f"--method {method} "
                      f"{grid} "
                      f"--n_jobs {args.n_jobs} "
                      f"--seed {args.seed} "
                      f"--out {out}")
    results = ' '.join(os.path.join('./runs', '_'.join([args.dataset, method, str(args.seed)]), 'results.csv')
                       for method in methods)
    os.system(f"python -m src.main plot --results {results} --out {os.path.join('./runs', args.dataset + '.png')}")


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Precision-vs-speedup sweep over every method')
    parser.add_argument('--dataset', help='dataset name inside data_dir.', default='synthetic')
    parser.add_argument('--data_dir', help='folder with the vector files.', default='./dataset')
    parser.add_argument('--n_jobs', help='query threads.', default=1)
    parser.add_argument('--seed', help='seed.', default=42)
    args = parser.parse_args()
    main(args)

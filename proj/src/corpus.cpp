#include "mimpv/corpus.hpp"

namespace mimpv::corpus {
namespace {
const char k_tritype[] = R"mimp(/* Triangle classification: returns 1 for scalene, 2 for isosceles,
   3 for equilateral, 4 if the sides do not form a triangle. */

/*@ requires (i >= 0 && j >= 0 && k >= 0);
  @ ensures
  @  ((((i+j) <= k || (j+k) <= i || (i+k) <= j) ==> (\result == 4))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && (i == j && j == k)) ==> (\result == 3))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && !(i == j && j == k) && (i == j || j == k || i == k)) ==> (\result == 2))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && !(i == j && j == k) && !(i == j || j == k || i == k)) ==> (\result == 1)));
  @*/
int tritype(int i, int j, int k) {
  int trityp;
  if (i == 0 || j == 0 || k == 0) {
    trityp = 4;
  } else {
    trityp = 0;
    if (i == j) {
      trityp = trityp + 1;
    }
    if (i == k) {
      trityp = trityp + 2;
    }
    if (j == k) {
      trityp = trityp + 3;
    }
    if (trityp == 0) {
      if ((i+j) <= k || (j+k) <= i || (i+k) <= j) {
        trityp = 4;
      } else {
        trityp = 1;
      }
    } else {
      if (trityp > 3) {
        trityp = 3;
      } else {
        if (trityp == 1 && (i+j) > k) {
          trityp = 2;
        } else {
          if (trityp == 2 && (i+k) > j) {
            trityp = 2;
          } else {
            if (trityp == 3 && (j+k) > i) {
              trityp = 2;
            } else {
              trityp = 4;
            }
          }
        }
      }
    }
  }
  return trityp;
}
)mimp";

const char k_tritypeKO[] = R"mimp(/* Faulty triangle classification: one branch tests trityp == 1
   where the correct program tests trityp == 2. */

/*@ requires (i >= 0 && j >= 0 && k >= 0);
  @ ensures
  @  ((((i+j) <= k || (j+k) <= i || (i+k) <= j) ==> (\result == 4))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && (i == j && j == k)) ==> (\result == 3))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && !(i == j && j == k) && (i == j || j == k || i == k)) ==> (\result == 2))
  @  && ((!((i+j) <= k || (j+k) <= i || (i+k) <= j) && !(i == j && j == k) && !(i == j || j == k || i == k)) ==> (\result == 1)));
  @*/
int tritypeKO(int i, int j, int k) {
  int trityp;
  if (i == 0 || j == 0 || k == 0) {
    trityp = 4;
  } else {
    trityp = 0;
    if (i == j) {
      trityp = trityp + 1;
    }
    if (i == k) {
      trityp = trityp + 2;
    }
    if (j == k) {
      trityp = trityp + 3;
    }
    if (trityp == 0) {
      if ((i+j) <= k || (j+k) <= i || (i+k) <= j) {
        trityp = 4;
      } else {
        trityp = 1;
      }
    } else {
      if (trityp > 3) {
        trityp = 3;
      } else {
        if (trityp == 1 && (i+j) > k) {
          trityp = 2;
        } else {
          if (trityp == 1 && (i+k) > j) { //ERROR: trityp==1 instead of 2
            trityp = 2;
          } else {
            if (trityp == 3 && (j+k) > i) {
              trityp = 2;
            } else {
              trityp = 4;
            }
          }
        }
      }
    }
  }
  return trityp;
}
)mimp";

const char k_binarySearch[] = R"mimp(/* Binary search over a sorted array: returns the index of x in tab,
   or -1 when x does not occur. */

/*@ requires (\forall int i; (i >= 0 && i < tab.length - 1); tab[i] <= tab[i+1]);
  @ ensures
  @  ((\result == -1) ==> (\forall int i; (i >= 0 && i < tab.length); tab[i] != x))
  @  && ((\result != -1) ==> (tab[\result] == x));
  @*/
int binarySearch(int[] tab, int x) {
  int index = -1;
  int m = 0;
  int l = 0;
  int u = tab.length - 1;
  while (index == -1 && l <= u) {
    m = (l + u) / 2;
    if (tab[m] == x) {
      index = m;
    } else {
      if (tab[m] > x) {
        u = m - 1;
      } else {
        l = m + 1;
      }
    }
  }
  return index;
}
)mimp";

const char k_binarySearchKO[] = R"mimp(/* Faulty binary search: the branch that should move the lower bound
   moves the upper bound instead, so the search can skip x. */

/*@ requires (\forall int i; (i >= 0 && i < tab.length - 1); tab[i] <= tab[i+1]);
  @ ensures
  @  ((\result == -1) ==> (\forall int i; (i >= 0 && i < tab.length); tab[i] != x))
  @  && ((\result != -1) ==> (tab[\result] == x));
  @*/
int binarySearchKO(int[] tab, int x) {
  int index = -1;
  int m = 0;
  int l = 0;
  int u = tab.length - 1;
  while (index == -1 && l <= u) {
    m = (l + u) / 2;
    if (tab[m] == x) {
      index = m;
    } else {
      if (tab[m] > x) {
        u = m - 1;
      } else {
        u = m - 1; //ERROR: u = m - 1 instead of l = m + 1
      }
    }
  }
  return index;
}
)mimp";

const char k_bubbleSortWithInit[] = R"mimp(/* Bubble sort applied to an array known to hold the values
   tab.length-1 .. 0 in decreasing order. */

/*@ requires (\forall int i; (0 <= i && i < tab.length); tab[i] == tab.length - 1 - i);
  @ ensures (\forall int i; (0 <= i && i < tab.length - 1); tab[i] <= tab[i+1]);
  @*/
void tri(int[] tab) {
  int i = 0;
  while (i < tab.length - 1) {
    int j = 0;
    while (j < tab.length - i - 1) {
      if (tab[j] > tab[j+1]) {
        int aux = tab[j];
        tab[j] = tab[j+1];
        tab[j+1] = aux;
      }
      j++;
    }
    i++;
  }
}
)mimp";

const char k_squareSum[] = R"mimp(/* Sum of the first n squares, checked against the closed form. */

/*@ requires (n >= 0);
  @ ensures \result == (n * (n + 1) * ((n * 2) + 1)) / 6;
  @*/
int somme(int n) {
  int i = 0;
  int s = 0;
  while (i <= n) {
    s = s + i * i;
    i = i + 1;
  }
  return s;
}
)mimp";

const char k_squareSumArray[] = R"mimp(/* Sum of squares of an array holding a permutation of 0 .. t.length-1,
   checked against the closed form for the sum of the first n squares. */

/*@ requires (n == t.length - 1)
  @  && (\forall int i; (0 <= i && i < t.length); 0 <= t[i] && t[i] <= n)
  @  && \alldifferent t;
  @ ensures \result == n * (n + 1) * (2 * n + 1) / 6;
  @*/
int sum(int[] t, int n) {
  int s = 0;
  int i = 0;
  while (i != t.length) {
    s = s + t[i] * t[i];
    i = i + 1;
  }
  return s;
}
)mimp";

const char k_selectionSort[] = R"mimp(/* Selection sort verified modularly: each call to findMin is replaced
   by its contract rather than inlined. */

/*@ ensures (\forall int i; (0 <= i && i < t.length - 1); t[i] <= t[i+1]);
  @*/
void selectionSort(int[] t) {
  for (int i = 0; i < t.length; i++) {
    int k = findMin(t, i);
    int tmp = t[i];
    t[i] = t[k];
    t[k] = tmp;
  }
}

/*@ requires 0 <= l && l < t.length;
  @ ensures (l <= \result) && (\result < t.length)
  @  && (\forall int k; (l <= k && k < t.length); t[\result] <= t[k]);
  @*/
int findMin(int[] t, int l) {
  int idx = l;
  for (int j = l + 1; j < t.length; j++) {
    if (t[idx] > t[j]) {
      idx = j;
    }
  }
  return idx;
}
)mimp";

const char k_findMin[] = R"mimp(/* Index of the minimum of t[l .. t.length-1]. */

/*@ requires 0 <= l && l < t.length;
  @ ensures (l <= \result) && (\result < t.length)
  @  && (\forall int k; (l <= k && k < t.length); t[\result] <= t[k]);
  @*/
int findMin(int[] t, int l) {
  int idx = l;
  for (int j = l + 1; j < t.length; j++) {
    if (t[idx] > t[j]) {
      idx = j;
    }
  }
  return idx;
}
)mimp";

}  // namespace

const std::vector<Entry>& all() {
  static const std::vector<Entry> entries = {
      {"tritype", "tritype.mimp", k_tritype},
      {"tritypeKO", "tritypeKO.mimp", k_tritypeKO},
      {"binarySearch", "binarySearch.mimp", k_binarySearch},
      {"binarySearchKO", "binarySearchKO.mimp", k_binarySearchKO},
      {"bubbleSortWithInit", "bubbleSortWithInit.mimp", k_bubbleSortWithInit},
      {"squareSum", "squareSum.mimp", k_squareSum},
      {"squareSumArray", "squareSumArray.mimp", k_squareSumArray},
      {"selectionSort", "selectionSort.mimp", k_selectionSort},
      {"findMin", "findMin.mimp", k_findMin},
  };
  return entries;
}

const Entry* find(const std::string& name) {
  for (const Entry& e : all()) {
    if (name == e.name) return &e;
  }
  return nullptr;
}

}  // namespace mimpv::corpus

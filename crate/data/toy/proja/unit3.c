int next_power ( int level , int total ) {
  if ( level == total ) {
    total = total * level ;
    total = total * total ;
  }
  total = total - 1 ;
  total = level + total ;
  total = level + total ;
  int index = total + 6 ;
  total = total + index ;
  return total ;
}
